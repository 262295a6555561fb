"""Truncated-domain mesh construction and stability checks.

The transformed put problem lives on x in [0, x_inf], tau in [0, T] with a
uniform mesh: dx = x_inf / J and a time step tied to dx through the
grid-ratio mu = dt / dx^2. The explicit scheme is conditionally stable;
``check_stability`` evaluates the two positivity inequalities

    dx <= sigma^2 / |r - sigma^2/2|        (skipped when r = sigma^2/2)
    dt <= dx^2 / (sigma^2 + r dx^2)

under which the stencil weights are non-negative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError

# relative threshold under which the drift r - sigma^2/2 counts as zero and
# the dx bound (whose denominator vanishes) is skipped
_DEGENERATE_DRIFT_RTOL = 1e-14

# snap T/dt to the nearest integer before ceiling, so grids whose time count
# is an integer in exact arithmetic do not gain a spurious extra step
_CEIL_SNAP_RTOL = 1e-9


@dataclass(frozen=True)
class ModelParams:
    """Market and contract constants: rate, volatility, strike, maturity."""

    r: float
    sigma: float
    strike: float
    maturity: float

    def __post_init__(self):
        for name in ("r", "sigma", "strike", "maturity"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise ParameterError(f"{name} must be a positive finite number, got {v!r}")

    @property
    def drift(self) -> float:
        """Convection coefficient r - sigma^2/2 of the transformed equation."""
        return self.r - 0.5 * self.sigma**2

    def drift_is_degenerate(self) -> bool:
        """True when r equals sigma^2/2 up to relative rounding noise."""
        return abs(self.drift) <= _DEGENERATE_DRIFT_RTOL * max(self.r, self.sigma**2)


@dataclass(frozen=True)
class GridSpec:
    """User-facing mesh parameters: truncation point, space intervals, grid-ratio."""

    x_inf: float
    J: int
    mu: float

    def __post_init__(self):
        if not (math.isfinite(self.x_inf) and self.x_inf > 0):
            raise ParameterError(f"x_inf must be positive and finite, got {self.x_inf!r}")
        if not (isinstance(self.J, (int, np.integer)) and self.J >= 3):
            # the boundary closure reads p_0, p_1, p_2, so J >= 3 is the minimum
            raise ParameterError(f"J must be an integer >= 3, got {self.J!r}")
        if not (math.isfinite(self.mu) and self.mu > 0):
            raise ParameterError(f"mu must be positive and finite, got {self.mu!r}")


@dataclass(frozen=True, eq=False)
class Grid:
    """Realized mesh: steps, node coordinates and the time-step count."""

    spec: GridSpec
    dx: float
    dt: float
    N: int
    x_nodes: np.ndarray = field(repr=False)
    t_nodes: np.ndarray = field(repr=False)

    @property
    def J(self) -> int:
        return self.spec.J

    @property
    def mu_effective(self) -> float:
        """Actual dt/dx^2; equals spec.mu whenever T/(mu dx^2) is an integer."""
        return self.dt / self.dx**2


def _ceil_snapped(value: float) -> int:
    """Ceiling that forgives float fuzz around exact integers."""
    nearest = round(value)
    if abs(value - nearest) <= _CEIL_SNAP_RTOL * max(1.0, abs(value)):
        return max(int(nearest), 1)
    return max(int(math.ceil(value)), 1)


def build_grid(model: ModelParams, spec: GridSpec) -> Grid:
    """Construct the uniform mesh for the given model and spec.

    dx = x_inf / J, N = ceil(T / (mu dx^2)) and dt = T / N so the final time
    level is exactly the maturity. When T/(mu dx^2) is an integer this agrees
    with dt = mu dx^2.
    """
    dx = spec.x_inf / spec.J
    N = _ceil_snapped(model.maturity / (spec.mu * dx * dx))
    dt = model.maturity / N
    x_nodes = np.arange(spec.J + 1) * dx
    t_nodes = np.arange(N + 1) * dt
    return Grid(spec=spec, dx=dx, dt=dt, N=N, x_nodes=x_nodes, t_nodes=t_nodes)


@dataclass(frozen=True)
class StabilityReport:
    """Outcome of the two positivity inequalities for an explicit solve."""

    dx_bound_ok: bool
    dt_bound_ok: bool
    dx_limit: float
    dt_limit: float
    coefficients_nonneg: bool


def check_stability(model: ModelParams, grid: Grid) -> StabilityReport:
    """Evaluate both step-size bounds; pure predicate, never raises.

    When r = sigma^2/2 the drift term vanishes and only the dt bound applies
    (dx_limit is reported as +inf).
    """
    sig2 = model.sigma**2
    if model.drift_is_degenerate():
        dx_limit = math.inf
        dx_ok = True
    else:
        dx_limit = sig2 / abs(model.drift)
        dx_ok = grid.dx <= dx_limit
    dt_limit = grid.dx**2 / (sig2 + model.r * grid.dx**2)
    dt_ok = grid.dt <= dt_limit
    return StabilityReport(
        dx_bound_ok=dx_ok,
        dt_bound_ok=dt_ok,
        dx_limit=dx_limit,
        dt_limit=dt_limit,
        coefficients_nonneg=dx_ok and dt_ok,
    )
