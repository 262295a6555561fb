"""Tolerance-driven grid refinement with a posteriori acceptance.

Solves on a ladder of exactly nested grids (J doubles, N quadruples, so the
refinement ratio is q = 4 with the grid-ratio mu held fixed), estimates the
error of each new level against its predecessor at every shared time level,
and accepts the first level whose field and boundary estimates both fall
below the tolerance.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError, StabilityError, ToleranceUnreachableError
from .grid import Grid, GridSpec, ModelParams, build_grid, check_stability
from .richardson import OrderSchedule, restrict
from .solver import Solution, SolveOptions, solve

ESTIMATORS = ("first_richardson", "safe")


@dataclass(frozen=True)
class RefinementConfig:
    """Ladder setup: model, coarsest grid, tolerance, cap and estimator choice."""

    model: ModelParams
    base: GridSpec
    epsilon: float
    max_levels: int = 8
    estimator: str = "first_richardson"
    schedule: OrderSchedule = field(default_factory=OrderSchedule)

    def __post_init__(self):
        if not (math.isfinite(self.epsilon) and self.epsilon > 0):
            raise ParameterError(f"epsilon must be positive, got {self.epsilon!r}")
        if not (isinstance(self.max_levels, int) and self.max_levels >= 1):
            raise ParameterError(f"max_levels must be a positive integer, got {self.max_levels!r}")
        if self.estimator not in ESTIMATORS:
            raise ParameterError(f"estimator must be one of {ESTIMATORS}, got {self.estimator!r}")


@dataclass(eq=False)
class LevelRecord:
    """One ladder rung and its error-estimate history against the level below."""

    level: int
    J: int
    N: int
    wall_time: float
    max_err_p: float | None = None
    max_err_sf: float | None = None
    # estimate series on the coarse time axis (index 0 unused: shared exact data)
    t_series: np.ndarray | None = None
    err_p_series: np.ndarray | None = None
    err_sf_series: np.ndarray | None = None


@dataclass(eq=False)
class RefinementReport:
    """Everything the driver learned: per-level records and the verdict."""

    epsilon: float
    estimator: str
    levels: list
    accepted_level: int | None = None

    def to_dict(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "estimator": self.estimator,
            "accepted_level": self.accepted_level,
            "levels": [
                {
                    "level": rec.level,
                    "J": rec.J,
                    "N": rec.N,
                    "wall_time": rec.wall_time,
                    "max_err_p": rec.max_err_p,
                    "max_err_sf": rec.max_err_sf,
                }
                for rec in self.levels
            ],
        }


def nested_grid(model: ModelParams, base: Grid, level: int) -> Grid:
    """Level g of the ladder: J_g = 2^g J_0, N_g = 4^g N_0, dt_g = T / N_g.

    N is pinned to the exact quadrupling (never re-derived through the
    ceiling) so the refinement ratio between adjacent levels is exactly 4.
    """
    J = base.spec.J * 2**level
    N = base.N * 4**level
    dx = base.spec.x_inf / J
    dt = model.maturity / N
    spec = GridSpec(x_inf=base.spec.x_inf, J=J, mu=dt / dx**2)
    return Grid(
        spec=spec,
        dx=dx,
        dt=dt,
        N=N,
        x_nodes=np.arange(J + 1) * dx,
        t_nodes=np.arange(N + 1) * dt,
    )


def adaptive_solve(config: RefinementConfig):
    """Run the ladder until the acceptance test holds; return (solution, report).

    The acceptance test for level g compares levels g-1 and g at every coarse
    time level n >= 1 (n = 0 is shared exact data), reducing the field
    difference by sup-norm over space. Level 0 alone is never accepted.
    Raises ToleranceUnreachableError (report attached) when max_levels is
    exhausted.
    """
    model = config.model
    base = build_grid(model, config.base)
    report0 = check_stability(model, base)
    if not report0.coefficients_nonneg:
        raise StabilityError(
            "base grid violates the stability bounds; refinement keeps mu fixed, "
            "so every level would inherit the violation",
            report=report0,
        )
    scale = config.schedule.gain(0) - 1.0 if config.estimator == "first_richardson" else 1.0

    report = RefinementReport(
        epsilon=config.epsilon, estimator=config.estimator, levels=[]
    )
    prev_solution: Solution | None = None
    prev_grid: Grid | None = None

    for g in range(config.max_levels):
        grid = nested_grid(model, base, g)
        t0 = time.perf_counter()
        sol = solve(model, grid, SolveOptions(keep_history=True))
        wall = time.perf_counter() - t0
        rec = LevelRecord(level=g, J=grid.J, N=grid.N, wall_time=wall)

        if prev_solution is not None:
            p_restr, sf_restr = restrict(sol, prev_grid)
            diff_p = np.max(
                np.abs(p_restr[1:] - prev_solution.history[1:]), axis=1
            ) / scale
            diff_sf = np.abs(sf_restr[1:] - prev_solution.s_f[1:]) / scale
            rec.t_series = prev_grid.t_nodes[1:].copy()
            rec.err_p_series = diff_p
            rec.err_sf_series = diff_sf
            rec.max_err_p = float(np.max(diff_p))
            rec.max_err_sf = float(np.max(diff_sf))
            report.levels.append(rec)
            if rec.max_err_p <= config.epsilon and rec.max_err_sf <= config.epsilon:
                report.accepted_level = g
                return sol, report
        else:
            report.levels.append(rec)

        prev_solution = sol
        prev_grid = grid

    raise ToleranceUnreachableError(
        f"tolerance {config.epsilon} not reached within {config.max_levels} levels "
        f"(last estimates: p {report.levels[-1].max_err_p}, "
        f"s_f {report.levels[-1].max_err_sf})",
        report,
    )
