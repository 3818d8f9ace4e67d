"""Exception and warning types shared across the toolkit.

Everything raised deliberately by this package derives from :class:`SqgError`
(or, for configuration problems, from its subclass :class:`ConfigError`), so
callers can catch toolkit failures without also swallowing programming errors.
"""

from __future__ import annotations


class SqgError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(SqgError, ValueError):
    """A parameter lies outside its admissible range (e.g. alpha not in [0, 1))."""


class SymmetryViolation(SqgError):
    """A spectral field is too far from Hermitian symmetry to represent real data."""


class InvalidSolution(SqgError):
    """An operation requiring a valid exact solution received an invalid one.

    Attributes:
        report: The ``ValidationReport`` describing every violated invariant.
    """

    def __init__(self, report):
        self.report = report
        lines = "; ".join(v.message for v in report.violations)
        super().__init__(f"solution fails validation: {lines}")


class BlowupDetected(SqgError):
    """The numerical solution became non-finite or grew past the blowup guard.

    Attributes:
        t: Simulation time at which the blowup was detected.
    """

    def __init__(self, t, detail=""):
        self.t = t
        msg = f"solution blew up at t = {t:g}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class UnderResolved(SqgError):
    """The grid does not resolve the solution's modes with the required margin."""


class DegenerateFit(SqgError):
    """A rate fit was requested on data that cannot support one."""


class ZeroField(SqgError):
    """A normalized diagnostic was requested on an (effectively) zero field."""


class FormatError(SqgError):
    """A data file does not conform to the documented on-disk format."""


class ConfigError(SqgError):
    """Base class for configuration problems.

    Attributes:
        issues: List of ``(location, message)`` pairs, where ``location`` is a
            1-based line number or a short string such as ``"<config>"``.
    """

    def __init__(self, issues):
        if isinstance(issues, str):
            issues = [("<config>", issues)]
        self.issues = list(issues)
        super().__init__(
            "; ".join(f"line {loc}: {msg}" if isinstance(loc, int) else f"{loc}: {msg}"
                      for loc, msg in self.issues))


class ParseError(ConfigError):
    """A config line is syntactically malformed or a required key is missing."""


class UnknownKey(ConfigError):
    """A config assigns to a key the format does not define."""


class ConstraintViolation(ConfigError):
    """A config parses but violates a semantic constraint (bad range, invalid solution)."""


class StabilityWarning(RuntimeWarning):
    """The configured time step exceeds the advective stability estimate."""
