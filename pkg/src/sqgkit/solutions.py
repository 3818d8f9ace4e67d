"""Closed-form quasi-stationary solutions of the dissipative SQG equation.

Two families are implemented.  Writing ``E = n² + m²``:

* :class:`EigenmodeSolution` — a fixed-pattern combination of Laplacian
  eigenfunctions,

      θ(x, y, t) = e^(-κ E^α t) (c₁ sin nx sin my + c₂ cos nx sin my
                                 + c₃ sin nx cos my + c₄ cos nx cos my)
                 + e^(-κ |k|^(2α) t) (c₅ sin kx + c₆ sin ky
                                      + c₇ cos kx + c₈ cos ky),

  subject to the coupling constraint ``n² + m² = k²`` whenever both
  coefficient groups are active (so the whole field remains a single
  Laplacian eigenfunction and the advection term cancels identically).

* :class:`UnidirectionalSolution` — a superposition along one direction,

      θ(x, y, t) = Σ_k e^(-κ (n²k² + m²k²)^α t)
                       (a_k cos(k(nx + my)) + b_k sin(k(nx + my))),

  constant along the parallel lines ``nx + my = const``; each mode decays at
  its own rate but the level sets stay parallel to their initial form.

For both families the velocity has a closed form via the eigenfunction
identity ``(-Δ)^(-1/2) θ_group = θ_group / sqrt(E_group)``, and the time
derivative is ``-κ E_group^α`` times each group, so every claim about these
solutions can be checked against the discrete operators to round-off.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Union

import numpy as np

from .errors import InvalidSolution
from .spectral import GridSpec, PhysicalField

__all__ = [
    "EigenmodeSolution",
    "UnidirectionalSolution",
    "Violation",
    "ValidationReport",
    "validate",
    "eval_theta",
    "eval_velocity",
    "eval_dtheta_dt",
    "theta_at",
    "velocity_at",
    "dtheta_dt_at",
    "BuiltinSample",
    "builtin_samples",
]

Solution = Union["EigenmodeSolution", "UnidirectionalSolution"]


@dataclass(frozen=True)
class EigenmodeSolution:
    """Fixed-pattern eigenfunction solution (see module docstring).

    ``c1..c4`` multiply the ``(n, m)`` double-trig group, ``c5..c8`` the
    axis-aligned ``k`` group in the order ``sin kx, sin ky, cos kx, cos ky``.
    """

    n: int
    m: int
    kappa: float
    alpha: float
    k: int = 0
    c1: float = 0.0
    c2: float = 0.0
    c3: float = 0.0
    c4: float = 0.0
    c5: float = 0.0
    c6: float = 0.0
    c7: float = 0.0
    c8: float = 0.0

    @property
    def group_a_active(self) -> bool:
        return abs(self.c1) + abs(self.c2) + abs(self.c3) + abs(self.c4) != 0.0

    @property
    def group_b_active(self) -> bool:
        return abs(self.c5) + abs(self.c6) + abs(self.c7) + abs(self.c8) != 0.0


@dataclass(frozen=True)
class UnidirectionalSolution:
    """Solution depending on space only through ``n x + m y``.

    Args:
        n, m: Direction integers, not both zero.
        kappa: Dissipation coefficient, > 0.
        alpha: Fractional dissipation exponent in [0, 1).
        modes: Sequence of ``(k, a_k, b_k)`` triples with pairwise distinct
            integer ``k``; the ``k = 0`` entry is a mean offset.
    """

    n: int
    m: int
    kappa: float
    alpha: float
    modes: tuple = field(default_factory=tuple)

    def __post_init__(self):
        normalized = tuple((int(k), float(a), float(b)) for k, a, b in self.modes)
        object.__setattr__(self, "modes", normalized)


@dataclass(frozen=True)
class Violation:
    """One violated solution invariant; ``code`` is stable, ``message`` is for humans."""

    code: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of :func:`validate`: every violated invariant, plus advisory notes."""

    violations: tuple = ()
    notes: tuple = ()

    @property
    def ok(self) -> bool:
        """True iff the candidate is an exact solution (no violations)."""
        return not self.violations

    def messages(self) -> list[str]:
        return [v.message for v in self.violations]


_CONSTRAINT_NOTE = (
    "coupling constraint interpreted as: (|c1|+|c2|+|c3|+|c4|) * (|c5|+|c6|+|c7|+|c8|)"
    " != 0 requires n^2 + m^2 = k^2")


def _check_common(kappa: float, alpha: float, out: list) -> None:
    if not np.isfinite(kappa) or kappa <= 0.0:
        out.append(Violation("kappa", f"kappa must be > 0, got {kappa}"))
    if not np.isfinite(alpha) or not (0.0 <= alpha < 1.0):
        out.append(Violation("alpha", f"alpha must lie in [0, 1), got {alpha}"))


def validate(sol: Solution) -> ValidationReport:
    """Check every invariant of a candidate solution.

    Validation is total: it never raises, it reports.  An empty violation list
    certifies that the candidate is an exact solution of the dissipative SQG
    equation; the notes record interpretation choices and benign flags.
    """
    violations: list[Violation] = []
    notes: list[str] = []
    if isinstance(sol, EigenmodeSolution):
        _check_common(sol.kappa, sol.alpha, violations)
        coeffs = (sol.c1, sol.c2, sol.c3, sol.c4, sol.c5, sol.c6, sol.c7, sol.c8)
        if not all(np.isfinite(c) for c in coeffs):
            violations.append(Violation("nonfinite", "coefficients must be finite"))
        if sol.n * sol.m == 0:
            violations.append(Violation("nm_zero", f"n*m must be nonzero, got n={sol.n}, m={sol.m}"))
        notes.append(_CONSTRAINT_NOTE)
        if sol.group_a_active and sol.group_b_active:
            e_a = sol.n * sol.n + sol.m * sol.m
            e_b = sol.k * sol.k
            if e_a != e_b:
                violations.append(Violation(
                    "constraint",
                    f"constraint n^2+m^2 = k^2 violated: {e_a} != {e_b}"))
        if sol.group_b_active and sol.k == 0:
            violations.append(Violation("k_zero", "k must be nonzero when c5..c8 are active"))
    elif isinstance(sol, UnidirectionalSolution):
        _check_common(sol.kappa, sol.alpha, violations)
        if abs(sol.n) + abs(sol.m) == 0:
            violations.append(Violation("nm_zero", "direction (n, m) must be nonzero"))
        ks = [k for k, _, _ in sol.modes]
        if len(ks) != len(set(ks)):
            dupes = sorted({k for k in ks if ks.count(k) > 1})
            violations.append(Violation("modes_dup", f"duplicate mode wavenumbers: {dupes}"))
        if not all(np.isfinite(a) and np.isfinite(b) for _, a, b in sol.modes):
            violations.append(Violation("nonfinite", "mode amplitudes must be finite"))
        if any(k == 0 and (a != 0.0 or b != 0.0) for k, a, b in sol.modes):
            notes.append("k = 0 mode present: a mean offset, constant in time for "
                         "alpha > 0 and decaying as exp(-kappa t) for alpha = 0")
        notes.append("finite mode list: the summability condition sum |k| (a_k^2 + b_k^2) "
                     "< inf holds trivially")
    else:
        raise TypeError(f"not a solution type: {type(sol).__name__}")
    return ValidationReport(tuple(violations), tuple(notes))


def _require_valid(sol: Solution) -> None:
    report = validate(sol)
    if not report.ok:
        raise InvalidSolution(report)


# --------------------------------------------------------------------------
# pointwise closed forms (arbitrary evaluation points; used by the grid API
# and by quadrature oracles)
# --------------------------------------------------------------------------

def _eigen_decays(sol: EigenmodeSolution, t: float) -> tuple[float, float]:
    e_a = float(sol.n * sol.n + sol.m * sol.m)
    e_b = float(sol.k * sol.k)
    return math.exp(-sol.kappa * e_a**sol.alpha * t), math.exp(-sol.kappa * e_b**sol.alpha * t)


def _theta_at(sol: Solution, t: float, x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if isinstance(sol, EigenmodeSolution):
        decay_a, decay_b = _eigen_decays(sol, t)
        out = np.zeros(np.broadcast(x, y).shape)
        if sol.group_a_active:
            nx, my = sol.n * x, sol.m * y
            out = out + decay_a * (sol.c1 * np.sin(nx) * np.sin(my)
                                   + sol.c2 * np.cos(nx) * np.sin(my)
                                   + sol.c3 * np.sin(nx) * np.cos(my)
                                   + sol.c4 * np.cos(nx) * np.cos(my))
        if sol.group_b_active:
            kx, ky = sol.k * x, sol.k * y
            out = out + decay_b * (sol.c5 * np.sin(kx) + sol.c6 * np.sin(ky)
                                   + sol.c7 * np.cos(kx) + sol.c8 * np.cos(ky))
        return out
    phase = sol.n * x + sol.m * y
    e_dir = float(sol.n * sol.n + sol.m * sol.m)
    out = np.zeros(np.broadcast(x, y).shape)
    for k, a, b in sol.modes:
        decay = math.exp(-sol.kappa * (e_dir * k * k)**sol.alpha * t)
        out = out + decay * (a * np.cos(k * phase) + b * np.sin(k * phase))
    return out


def _velocity_at(sol: Solution, t: float, x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    shape = np.broadcast(x, y).shape
    u = np.zeros(shape)
    v = np.zeros(shape)
    if isinstance(sol, EigenmodeSolution):
        decay_a, decay_b = _eigen_decays(sol, t)
        if sol.group_a_active:
            # psi = theta_A / sqrt(n^2 + m^2); u = d_y psi, v = -d_x psi.
            lam = 1.0 / math.sqrt(sol.n * sol.n + sol.m * sol.m)
            nx, my = sol.n * x, sol.m * y
            dy = sol.m * (sol.c1 * np.sin(nx) * np.cos(my)
                          + sol.c2 * np.cos(nx) * np.cos(my)
                          - sol.c3 * np.sin(nx) * np.sin(my)
                          - sol.c4 * np.cos(nx) * np.sin(my))
            dx = sol.n * (sol.c1 * np.cos(nx) * np.sin(my)
                          - sol.c2 * np.sin(nx) * np.sin(my)
                          + sol.c3 * np.cos(nx) * np.cos(my)
                          - sol.c4 * np.sin(nx) * np.cos(my))
            u = u + decay_a * lam * dy
            v = v - decay_a * lam * dx
        if sol.group_b_active:
            lam = 1.0 / abs(sol.k)
            kx, ky = sol.k * x, sol.k * y
            dy = sol.k * (sol.c6 * np.cos(ky) - sol.c8 * np.sin(ky))
            dx = sol.k * (sol.c5 * np.cos(kx) - sol.c7 * np.sin(kx))
            u = u + decay_b * lam * dy
            v = v - decay_b * lam * dx
        return u, v
    e_dir = float(sol.n * sol.n + sol.m * sol.m)
    phase = sol.n * x + sol.m * y
    for k, a, b in sol.modes:
        if k == 0:
            continue  # the mean has no stream function (zero-mode convention)
        decay = math.exp(-sol.kappa * (e_dir * k * k)**sol.alpha * t)
        lam = 1.0 / (abs(k) * math.sqrt(e_dir))
        deriv = k * (-a * np.sin(k * phase) + b * np.cos(k * phase))
        u = u + decay * lam * sol.m * deriv
        v = v - decay * lam * sol.n * deriv
    return u, v


def _dtheta_dt_at(sol: Solution, t: float, x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    out = np.zeros(np.broadcast(x, y).shape)
    if isinstance(sol, EigenmodeSolution):
        decay_a, decay_b = _eigen_decays(sol, t)
        if sol.group_a_active:
            e_a = float(sol.n * sol.n + sol.m * sol.m)
            nx, my = sol.n * x, sol.m * y
            group = (sol.c1 * np.sin(nx) * np.sin(my) + sol.c2 * np.cos(nx) * np.sin(my)
                     + sol.c3 * np.sin(nx) * np.cos(my) + sol.c4 * np.cos(nx) * np.cos(my))
            out = out - sol.kappa * e_a**sol.alpha * decay_a * group
        if sol.group_b_active:
            e_b = float(sol.k * sol.k)
            kx, ky = sol.k * x, sol.k * y
            group = (sol.c5 * np.sin(kx) + sol.c6 * np.sin(ky)
                     + sol.c7 * np.cos(kx) + sol.c8 * np.cos(ky))
            out = out - sol.kappa * e_b**sol.alpha * decay_b * group
        return out
    e_dir = float(sol.n * sol.n + sol.m * sol.m)
    phase = sol.n * x + sol.m * y
    for k, a, b in sol.modes:
        rate = sol.kappa * (e_dir * k * k)**sol.alpha
        decay = math.exp(-rate * t)
        out = out - rate * decay * (a * np.cos(k * phase) + b * np.sin(k * phase))
    return out


def theta_at(sol: Solution, t: float, x, y):
    """Evaluate θ at arbitrary points (validates first).  Arrays broadcast."""
    _require_valid(sol)
    return _theta_at(sol, t, x, y)


def velocity_at(sol: Solution, t: float, x, y):
    """Evaluate the closed-form velocity ``(u, v)`` at arbitrary points."""
    _require_valid(sol)
    return _velocity_at(sol, t, x, y)


def dtheta_dt_at(sol: Solution, t: float, x, y):
    """Evaluate the closed-form time derivative at arbitrary points."""
    _require_valid(sol)
    return _dtheta_dt_at(sol, t, x, y)


# --------------------------------------------------------------------------
# grid evaluation (the primary path)
# --------------------------------------------------------------------------

def eval_theta(sol: Solution, t: float, grid: GridSpec) -> PhysicalField:
    """Evaluate θ(·, t) at the grid nodes.

    At ``t = 0`` the decay factors are exactly 1, so the returned field is the
    bare trigonometric pattern.

    Raises:
        InvalidSolution: If :func:`validate` reports any violation.
    """
    _require_valid(sol)
    X, Y = grid.nodes()
    return PhysicalField(grid, _theta_at(sol, t, X, Y))


def eval_velocity(sol: Solution, t: float, grid: GridSpec) -> tuple[PhysicalField, PhysicalField]:
    """Evaluate the analytic velocity ``(u, v)`` at the grid nodes.

    Uses the eigenfunction identity ``(-Δ)^(-1/2) θ_group = θ_group / sqrt(E)``
    per constituent group, then differentiates the closed form — no transforms
    are involved, which makes this an independent oracle for the spectral
    velocity path.

    Raises:
        InvalidSolution: If validation fails.
    """
    _require_valid(sol)
    X, Y = grid.nodes()
    u, v = _velocity_at(sol, t, X, Y)
    return PhysicalField(grid, u), PhysicalField(grid, v)


def eval_dtheta_dt(sol: Solution, t: float, grid: GridSpec) -> PhysicalField:
    """Evaluate the analytic ∂θ/∂t = -κ Σ_groups E^α θ_group at the grid nodes.

    Raises:
        InvalidSolution: If validation fails.
    """
    _require_valid(sol)
    X, Y = grid.nodes()
    return PhysicalField(grid, _dtheta_dt_at(sol, t, X, Y))


# --------------------------------------------------------------------------
# named samples
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class BuiltinSample:
    """A named sample: either an exact solution family member or a plain datum.

    Attributes:
        name: Lookup key.
        exact: True when the sample is an exact solution; False for the
            "not-exact" initial data, which evolve with genuinely changing
            patterns.
        description: Human-readable summary of the field.
        solution: ``solution(kappa, alpha)`` builds the solution object with
            the requested parameters, or returns None when the sample has no
            single-solution form.  For ``con-1`` the returned object is
            deliberately the constraint-violating candidate, so validation
            demonstrably rejects it.
    """

    name: str
    exact: bool
    description: str
    _factory: Callable[[float, float], Solution | None]
    _datum: Callable

    def solution(self, kappa: float, alpha: float) -> Solution | None:
        return self._factory(kappa, alpha)

    def initial_field(self, grid: GridSpec) -> PhysicalField:
        """The sample's field at ``t = 0`` on the given grid."""
        return PhysicalField.from_function(grid, self._datum)


def _theta1(kappa, alpha):
    return EigenmodeSolution(n=2, m=1, kappa=kappa, alpha=alpha, c1=1.0, c4=0.5)


def _theta2(kappa, alpha):
    return EigenmodeSolution(n=4, m=3, k=5, kappa=kappa, alpha=alpha,
                             c1=1.0, c4=0.5, c5=0.5, c6=1.0)


def _theta3(kappa, alpha):
    return UnidirectionalSolution(n=1, m=1, kappa=kappa, alpha=alpha,
                                  modes=((1, 0.0, 1.0), (2, 0.0, 1.0)))


def _con1_candidate(kappa, alpha):
    # sin x sin y + cos y as a single eigenmode candidate: both groups active
    # with n = m = k = 1, so the coupling constraint fails (2 != 1).
    return EigenmodeSolution(n=1, m=1, k=1, kappa=kappa, alpha=alpha, c1=1.0, c8=1.0)


def builtin_samples() -> dict[str, BuiltinSample]:
    """Named samples: the three exact solutions and three non-exact initial data.

    Returns:
        Mapping from name to :class:`BuiltinSample`, in a stable order:
        ``theta1``, ``theta2``, ``theta3`` (exact), then ``con-1``, ``con-2``,
        ``con-3`` (classic test data that violate the eigenfunction structure
        and therefore evolve non-trivially).
    """
    return {
        "theta1": BuiltinSample(
            "theta1", True, "sin 2x sin y + 1/2 cos 2x cos y (decay rate kappa*5^alpha)",
            _theta1,
            lambda X, Y: np.sin(2 * X) * np.sin(Y) + 0.5 * np.cos(2 * X) * np.cos(Y)),
        "theta2": BuiltinSample(
            "theta2", True,
            "sin 4x sin 3y + 1/2 cos 4x cos 3y + 1/2 sin 5x + sin 5y "
            "(decay rate kappa*25^alpha)",
            _theta2,
            lambda X, Y: (np.sin(4 * X) * np.sin(3 * Y) + 0.5 * np.cos(4 * X) * np.cos(3 * Y)
                          + 0.5 * np.sin(5 * X) + np.sin(5 * Y))),
        "theta3": BuiltinSample(
            "theta3", True, "sin(x+y) + sin(2x+2y) (unidirectional, two decay rates)",
            _theta3,
            lambda X, Y: np.sin(X + Y) + np.sin(2 * X + 2 * Y)),
        "con-1": BuiltinSample(
            "con-1", False, "sin x sin y + cos y (mixes eigenvalues 2 and 1)",
            _con1_candidate,
            lambda X, Y: np.sin(X) * np.sin(Y) + np.cos(Y)),
        "con-2": BuiltinSample(
            "con-2", False, "-cos 2x cos y + sin x sin y (mixes eigenvalues 5 and 2)",
            lambda kappa, alpha: None,
            lambda X, Y: -np.cos(2 * X) * np.cos(Y) + np.sin(X) * np.sin(Y)),
        "con-3": BuiltinSample(
            "con-3", False, "cos 2x cos y + sin x sin y + cos 2x sin 3y",
            lambda kappa, alpha: None,
            lambda X, Y: (np.cos(2 * X) * np.cos(Y) + np.sin(X) * np.sin(Y)
                          + np.cos(2 * X) * np.sin(3 * Y))),
    }


def with_parameters(sol: Solution, kappa: float | None = None,
                    alpha: float | None = None) -> Solution:
    """Copy of ``sol`` with ``kappa`` and/or ``alpha`` replaced."""
    updates = {}
    if kappa is not None:
        updates["kappa"] = float(kappa)
    if alpha is not None:
        updates["alpha"] = float(alpha)
    return replace(sol, **updates) if updates else sol
