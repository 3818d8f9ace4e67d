"""Quantitative checks of every property the exact solutions are claimed to have.

The central object is the discrete residual of the SQG equation

    r = ∂θ/∂t + u·∇θ + κ (-Δ)^α θ,

assembled with the *analytic* time derivative (so the residual isolates the
spatial operators) and the spectral advection/dissipation terms.  For a valid
solution of either family the residual is round-off; for a constraint-breaking
candidate the advection term survives and the report flags it.

Also here: decay-rate fits against κ·E^α, the pattern-correlation and
unidirectionality metrics that operationalize "the flow pattern does not
change", and solver-versus-exact error tracking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import solutions as _sol
from .errors import DegenerateFit, DomainError, InvalidSolution, UnderResolved, ZeroField
from .integrator import SolverParams, Trajectory, simulate
from .solutions import EigenmodeSolution, UnidirectionalSolution, ValidationReport, validate
from .spectral import (GridSpec, PhysicalField, _frac_laplacian_multiplier, _nonlinear_hat,
                       _to_coefficients, _to_values)

__all__ = [
    "ResidualReport",
    "DecayFit",
    "residual",
    "decay_rate_fit",
    "pattern_correlation",
    "unidirectionality_check",
    "solver_vs_exact",
    "max_mode",
]


@dataclass(frozen=True)
class ResidualReport:
    """Norms of the discrete PDE residual at one time.

    ``nonlinear_linf`` is the sup norm of the advection term alone: ~0 for
    every exact solution, order one for candidates that merely look like one.
    """

    t: float
    l_inf: float
    l2: float
    nonlinear_linf: float
    grid: GridSpec


@dataclass(frozen=True)
class DecayFit:
    """Least-squares decay rate of log ||θ(t)||₂ against the analytic rate."""

    fitted_rate: float
    expected_rate: float
    relative_error: float
    sample_times: tuple


def max_mode(sol) -> tuple[int, int]:
    """Largest active integer wavenumber of ``sol`` per axis."""
    if isinstance(sol, EigenmodeSolution):
        mx = my = 0
        if sol.group_a_active:
            mx, my = abs(sol.n), abs(sol.m)
        if sol.group_b_active:
            mx, my = max(mx, abs(sol.k)), max(my, abs(sol.k))
        return mx, my
    if isinstance(sol, UnidirectionalSolution):
        active = [abs(k) for k, a, b in sol.modes if a != 0.0 or b != 0.0]
        top = max(active, default=0)
        return top * abs(sol.n), top * abs(sol.m)
    raise TypeError(f"not a solution type: {type(sol).__name__}")


# Validation codes that make pointwise evaluation itself meaningless.  The
# Pythagorean coupling constraint is deliberately NOT among them: a
# constraint-breaking candidate still defines a perfectly good field, and the
# residual report is exactly the tool that exposes its non-exactness.
_HARD_CODES = frozenset({"kappa", "alpha", "nm_zero", "k_zero", "modes_dup", "nonfinite"})


def residual(sol, t: float, grid: GridSpec, kappa: float | None = None,
             alpha: float | None = None) -> ResidualReport:
    """Assemble the discrete SQG residual of ``sol`` at time ``t``.

    Args:
        sol: Solution (or candidate) from :mod:`sqgkit.solutions`.
        t: Evaluation time.
        grid: Grid for the spectral operators; must resolve every active mode
            with a margin of at least 2x (i.e. ``4 * max_mode <= n``).
        kappa, alpha: Optional overrides of the solution's own parameters,
            convenient for parameter sweeps.

    Returns:
        Norms of ∂θ/∂t + u·∇θ + κ(-Δ)^α θ; all below 1e-10 for valid
        solutions on grids up to 256².

    Raises:
        InvalidSolution: For violations that break evaluation itself (bad
            κ/α, zero direction, duplicate modes).  A broken coupling
            constraint does *not* raise — it shows up as a large
            ``nonlinear_linf``.
        UnderResolved: If the grid margin check fails.
    """
    sol = _sol.with_parameters(sol, kappa, alpha)
    report = validate(sol)
    hard = [v for v in report.violations if v.code in _HARD_CODES]
    if hard:
        raise InvalidSolution(ValidationReport(tuple(hard), report.notes))
    mx, my = max_mode(sol)
    if 4 * mx > grid.n_x or 4 * my > grid.n_y:
        raise UnderResolved(
            f"grid {grid.n_x}x{grid.n_y} resolves modes up to "
            f"({grid.n_x // 4}, {grid.n_y // 4}) with 2x margin; "
            f"solution needs ({mx}, {my})")

    X, Y = grid.nodes()
    theta = _sol._theta_at(sol, t, X, Y)
    dtheta_dt = _sol._dtheta_dt_at(sol, t, X, Y)
    coef = _to_coefficients(theta, grid)
    nonlin_hat = _nonlinear_hat(coef, grid, dealias=True)
    dissip_hat = sol.kappa * _frac_laplacian_multiplier(grid.n_x, grid.n_y, sol.alpha) * coef
    resid = dtheta_dt + _to_values(nonlin_hat + dissip_hat, grid)
    nonlinear_linf = float(np.max(np.abs(_to_values(nonlin_hat, grid))))
    l_inf = float(np.max(np.abs(resid)))
    l2 = float(np.sqrt(np.sum(resid**2) * grid.cell_area))
    return ResidualReport(t=float(t), l_inf=l_inf, l2=l2,
                          nonlinear_linf=nonlinear_linf, grid=grid)


def decay_rate_fit(traj: Trajectory, expected_eigenvalue: float, kappa: float,
                   alpha: float) -> DecayFit:
    """Fit the decay rate of ``log ||θ(t)||₂`` over a trajectory.

    For a single-eigenvalue solution the norm is exactly
    ``exp(-κ E^α t) ||θ(0)||₂``, so the least-squares slope recovers
    ``κ E^α`` to round-off.

    Args:
        traj: Trajectory with at least 3 snapshots of nonzero norm.
        expected_eigenvalue: The squared wavenumber magnitude E = n² + m².
        kappa, alpha: Parameters defining the expected rate κ·E^α.

    Raises:
        DegenerateFit: Fewer than 3 snapshots, zero time spread, or a norm
            underflowing 1e-300.
    """
    times = np.array([s.t for s in traj.snapshots], dtype=float)
    norms = np.array([s.l2 for s in traj.snapshots], dtype=float)
    if len(times) < 3:
        raise DegenerateFit(f"need at least 3 snapshots, got {len(times)}")
    if np.any(norms < 1e-300):
        raise DegenerateFit("L2 norm underflow: extend the snapshot window or "
                            "rescale the initial datum")
    if times[-1] - times[0] <= 0.0:
        raise DegenerateFit("snapshot times have zero spread")
    slope = np.polyfit(times, np.log(norms), 1)[0]
    fitted = -float(slope)
    expected = kappa * float(expected_eigenvalue)**alpha
    rel = abs(fitted - expected) / abs(expected)
    return DecayFit(fitted_rate=fitted, expected_rate=expected,
                    relative_error=rel, sample_times=tuple(times))


def pattern_correlation(a: PhysicalField, b: PhysicalField) -> float:
    """L2 inner product of the mean-removed, unit-normalized fields.

    Equals 1 exactly when ``a`` and ``b`` are positive scalar multiples of
    each other — the operational meaning of "the flow pattern is unchanged",
    since proportional mean-free fields share every level set.

    Raises:
        ValueError: If the fields live on different grids.
        ZeroField: If either mean-removed field has norm below 1e-300.
    """
    if a.grid != b.grid:
        raise ValueError(f"grid mismatch: {a.grid} vs {b.grid}")
    da = a.values - a.values.mean()
    db = b.values - b.values.mean()
    na = float(np.sqrt(np.sum(da * da)))
    nb = float(np.sqrt(np.sum(db * db)))
    if na < 1e-300 or nb < 1e-300:
        raise ZeroField("pattern correlation of an (effectively) zero field")
    corr = float(np.sum(da * db)) / (na * nb)
    return min(1.0, max(-1.0, corr))


def unidirectionality_check(f: PhysicalField, n: int, m: int) -> float:
    """Fraction of spectral energy off the ray through ``(n, m)``.

    A wavevector ``(kx, ky)`` lies on the ray iff ``kx·m - ky·n = 0`` (the
    mean mode counts as on-ray).  Returns 0 for perfectly unidirectional
    fields; the ``sin x sin y`` checkerboard against ``(1, 1)`` gives exactly
    0.5 (half its energy sits on the perpendicular diagonal).

    Raises:
        DomainError: If ``n = m = 0``.
        ZeroField: If the field carries no spectral energy.
    """
    n, m = int(n), int(m)
    if n == 0 and m == 0:
        raise DomainError("direction (n, m) must be nonzero")
    grid = f.grid
    energy = np.abs(_to_coefficients(f.values, grid))**2
    total = float(energy.sum())
    if total < 1e-300:
        raise ZeroField("unidirectionality check of an (effectively) zero field")
    KX, KY = grid.wavenumbers()
    off_ray = KX * m - KY * n != 0.0  # exact: small-integer float arithmetic
    return float(energy[off_ray].sum()) / total


def solver_vs_exact(sol, params: SolverParams, grid: GridSpec) -> list[tuple[float, float]]:
    """Relative L2 error of the solver against the exact solution over time.

    Runs :func:`sqgkit.integrator.simulate` from ``eval_theta(sol, 0)`` and
    compares each snapshot against ``eval_theta(sol, t)``.

    Returns:
        List of ``(t, relative_l2_error)`` pairs, one per snapshot.

    Raises:
        InvalidSolution: If ``sol`` does not validate (this check requires a
            genuinely exact reference).
    """
    report = validate(sol)
    if not report.ok:
        raise InvalidSolution(report)
    initial = _sol.eval_theta(sol, 0.0, grid)
    traj = simulate(initial, params)
    series = []
    for snap in traj.snapshots:
        exact = _sol.eval_theta(sol, snap.t, grid)
        denom = max(exact.l2_norm(), 1e-300)
        diff = PhysicalField(grid, snap.field.values - exact.values)
        series.append((snap.t, diff.l2_norm() / denom))
    return series
