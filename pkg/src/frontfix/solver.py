"""Explicit time marching for the front-fixed American put.

The change of variables x = ln(S / S_f(tau)) pins the early-exercise boundary
to x = 0 and makes the unknowns the dimensionless price field p(x, tau) in
[0, 1] and the boundary fraction S_f(tau) = S*(tau)/E in (0, 1]. Each step
first advances the boundary through the multiplier d^n, then rebuilds the two
boundary values from the closure relations, and finally sweeps the interior
stencil with the convection-corrected weights.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BlowUpError, ParameterError, SingularDenominatorError, StabilityError
from .grid import Grid, ModelParams, check_stability

# denominator magnitude below which the boundary update is deemed singular
_SINGULAR_DENOM = 1e-300

# sup-norm ceiling: the stable scheme keeps |p| <= 1, so a visible excursion
# above 1 is divergence, not rounding
_SUP_NORM_LIMIT = 1.0 + 1e-9


@dataclass(frozen=True)
class Coefficients:
    """Stencil weights and boundary-closure constants.

    a, b, c multiply p_{j-1}, p_j, p_{j+1}; they sum to 1 - r dt. a1 and b1
    enter the closure p_1 = a1 - b1 * S_f obtained by eliminating the
    fictitious node at x = -dx.
    """

    a: float
    b: float
    c: float
    a1: float
    b1: float


def step_coefficients(model: ModelParams, grid: Grid) -> Coefficients:
    """Compute the explicit-scheme weights for this model/grid pair.

    Uses the realized grid-ratio dt/dx^2 so the identity a + b + c = 1 - r dt
    holds for the dt actually marched.
    """
    dx, dt = grid.dx, grid.dt
    mu = grid.mu_effective
    sig2 = model.sigma**2
    drift = model.drift
    a = 0.5 * mu * (sig2 - drift * dx)
    b = 1.0 - mu * sig2 - model.r * dt
    c = 0.5 * mu * (sig2 + drift * dx)
    a1 = 1.0 + model.r * dx * dx / sig2
    b1 = 1.0 + dx + 0.5 * dx * dx
    return Coefficients(a=a, b=b, c=c, a1=a1, b1=b1)


@dataclass(frozen=True, eq=False)
class TimeSlice:
    """The solution state at one time level: field row p and boundary S_f."""

    n: int
    t: float
    p: np.ndarray = field(repr=False)
    s_f: float


def initial_slice(grid: Grid) -> TimeSlice:
    """Payoff-time data: p identically zero, boundary at the strike."""
    return TimeSlice(n=0, t=0.0, p=np.zeros(grid.J + 1), s_f=1.0)


def advance(slice_: TimeSlice, coeffs: Coefficients, grid: Grid) -> TimeSlice:
    """One explicit step: boundary first, then closure values, then interior.

    Raises BlowUpError when the boundary leaves (0, 1] or the field row
    escapes the unit sup-norm bound, and SingularDenominatorError when the
    boundary-update denominator underflows.
    """
    p = slice_.p
    s_f = slice_.s_f
    dx = grid.dx
    a, b, c, a1, b1 = coeffs.a, coeffs.b, coeffs.c, coeffs.a1, coeffs.b1

    dp1 = (p[2] - p[0]) / (2.0 * dx)
    denom = dp1 + b1 * s_f
    if abs(denom) < _SINGULAR_DENOM:
        raise SingularDenominatorError(slice_.n + 1, s_f, p)
    d = (a1 - (a * p[0] + b * p[1] + c * p[2] - dp1)) / denom
    s_next = d * s_f
    if s_next <= 0.0 or s_next > 1.0:
        raise BlowUpError(slice_.n + 1, s_next, p, "free boundary left (0, 1]")

    p_next = np.empty_like(p)
    p_next[0] = 1.0 - s_next
    p_next[1] = a1 - b1 * s_next
    delta = (s_next - s_f) / s_f
    shift = delta / (2.0 * dx)
    p_next[2:-1] = (a - shift) * p[1:-2] + b * p[2:-1] + (c + shift) * p[3:]
    p_next[-1] = 0.0

    sup = float(np.max(np.abs(p_next)))
    if sup > _SUP_NORM_LIMIT or not math.isfinite(sup):
        raise BlowUpError(slice_.n + 1, s_next, p_next, "field sup-norm exceeded 1")

    return TimeSlice(n=slice_.n + 1, t=(slice_.n + 1) * grid.dt, p=p_next, s_f=s_next)


@dataclass(frozen=True)
class SolveOptions:
    """March controls.

    force skips the stability gate; keep_history retains every time level
    (needed by restriction/estimation); snapshot_times lists extra times
    (rounded to the nearest level) whose slices are kept in lean mode.
    """

    force: bool = False
    keep_history: bool = False
    snapshot_times: tuple = ()


@dataclass(eq=False)
class Solution:
    """Result of a march: boundary series, final slice and optional history."""

    model: ModelParams
    grid: Grid
    s_f: np.ndarray
    final: TimeSlice
    snapshots: dict
    history: np.ndarray | None = None

    def slice_at(self, n: int) -> TimeSlice:
        """Return the slice at time index n, if it was retained."""
        grid = self.grid
        if not 0 <= n <= grid.N:
            raise ParameterError(f"time index {n} outside 0..{grid.N}")
        if self.history is not None:
            return TimeSlice(n=n, t=n * grid.dt, p=self.history[n], s_f=float(self.s_f[n]))
        if n == 0:
            return initial_slice(grid)
        if n == grid.N:
            return self.final
        if n in self.snapshots:
            return self.snapshots[n]
        raise ParameterError(
            f"slice {n} not stored; re-solve with keep_history=True or request it as a snapshot"
        )


def solve(model: ModelParams, grid: Grid, opts: SolveOptions | None = None) -> Solution:
    """March the scheme from payoff time to maturity.

    Refuses unstable grids unless opts.force; propagates blow-up errors from
    the stepping so a forced unstable run fails loudly with context.
    """
    opts = opts or SolveOptions()
    report = check_stability(model, grid)
    if not report.coefficients_nonneg and not opts.force:
        raise StabilityError(
            "grid violates the explicit-scheme stability bounds "
            f"(dx ok: {report.dx_bound_ok}, dt ok: {report.dt_bound_ok}); "
            "pass force=True to run anyway",
            report=report,
        )

    coeffs = step_coefficients(model, grid)
    N = grid.N
    snap_indices = {int(round(t / grid.dt)) for t in opts.snapshot_times}

    s_series = np.empty(N + 1)
    s_series[0] = 1.0
    history = np.zeros((N + 1, grid.J + 1)) if opts.keep_history else None
    snapshots: dict[int, TimeSlice] = {}

    current = initial_slice(grid)
    if 0 in snap_indices:
        snapshots[0] = current
    for n in range(N):
        current = advance(current, coeffs, grid)
        s_series[current.n] = current.s_f
        if history is not None:
            history[current.n] = current.p
        elif current.n in snap_indices and current.n != N:
            snapshots[current.n] = current

    return Solution(
        model=model,
        grid=grid,
        s_f=s_series,
        final=current,
        snapshots=snapshots,
        history=history,
    )


@dataclass(frozen=True)
class PricePoint:
    """One priced point in financial variables."""

    S: float
    tau: float
    P: float
    region: str  # "continuation" or "exercise"


def untransform(solution: Solution, n: int) -> list[PricePoint]:
    """Map the slice at time index n back to asset prices and option values.

    Returns the exercise-boundary point (S = E S_f, P = E - S) followed by
    the grid nodes S = E S_f exp(x_j).
    """
    slice_ = solution.slice_at(n)
    E = solution.model.strike
    tau = slice_.t
    boundary_S = E * slice_.s_f
    points = [PricePoint(S=boundary_S, tau=tau, P=E - boundary_S, region="exercise")]
    S_vals = boundary_S * np.exp(solution.grid.x_nodes)
    for S, p in zip(S_vals, slice_.p):
        points.append(PricePoint(S=float(S), tau=tau, P=float(E * p), region="continuation"))
    return points


def price_at(solution: Solution, S: float, tau: float) -> PricePoint:
    """Value the put at an arbitrary asset price and time to maturity.

    Snaps tau to the nearest stored time level; inside the exercise region
    returns intrinsic value exactly, beyond the truncation point returns 0,
    otherwise linearly interpolates the field in x.
    """
    model, grid = solution.model, solution.grid
    if not (isinstance(S, (int, float)) and math.isfinite(S) and S > 0):
        raise ParameterError(f"asset price must be positive, got {S!r}")
    if not (0.0 <= tau <= model.maturity * (1 + 1e-12)):
        raise ParameterError(f"tau must lie in [0, {model.maturity}], got {tau!r}")

    n = int(round(tau / grid.dt))
    slice_ = solution.slice_at(n)
    E = model.strike
    boundary_S = E * slice_.s_f
    if S < boundary_S:
        return PricePoint(S=S, tau=slice_.t, P=E - S, region="exercise")
    x = math.log(S / boundary_S)
    if x >= grid.spec.x_inf:
        return PricePoint(S=S, tau=slice_.t, P=0.0, region="continuation")
    p = float(np.interp(x, grid.x_nodes, slice_.p))
    return PricePoint(S=S, tau=slice_.t, P=E * p, region="continuation")
