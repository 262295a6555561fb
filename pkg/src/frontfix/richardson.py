"""Richardson extrapolation and a posteriori error estimation.

Given solutions U_g on a ladder of grids refined by a fixed ratio
q = N_{g+1}/N_g, the global error is modelled as a sum of powers
(1/N)^{p_k} with p_k = p0 + k * step. Each extrapolation level cancels the
current leading power:

    U_{g+1,k+1} = U_{g+1,k} + (U_{g+1,k} - U_{g,k}) / (q^{p_k} - 1)

and two adjacent un-extrapolated solutions yield the computable estimators
e_s = U_{g+1} - U_g (safe) and e_r = e_s / (q^{p0} - 1) (first Richardson).
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NestingError, ParameterError
from .grid import Grid
from .solver import Solution


@dataclass(frozen=True)
class OrderSchedule:
    """Error-order ladder p_k = p0 + k * step under refinement ratio q."""

    p0: float = 1.0
    step: float = 1.0
    q: float = 4.0

    def __post_init__(self):
        if not (math.isfinite(self.p0) and self.p0 > 0):
            raise ParameterError(f"p0 must be positive, got {self.p0!r}")
        if not (math.isfinite(self.step) and self.step > 0):
            raise ParameterError(f"order step must be positive, got {self.step!r}")
        if not (math.isfinite(self.q) and self.q > 1):
            raise ParameterError(f"refinement ratio q must exceed 1, got {self.q!r}")

    def order(self, k: int) -> float:
        return self.p0 + k * self.step

    def gain(self, k: int) -> float:
        """q^{p_k}; the geometric factor cancelled at extrapolation level k."""
        g = self.q ** self.order(k)
        if abs(g - 1.0) < 1e-12:
            raise ParameterError(f"degenerate schedule: q^p_{k} = 1")
        return g


@dataclass(frozen=True, eq=False)
class Tableau:
    """Triangular extrapolation table; row g holds U_{g,0} .. U_{g,g}."""

    entries: tuple
    schedule: OrderSchedule

    @property
    def depth(self) -> int:
        return len(self.entries)

    def column(self, k: int) -> list:
        return [row[k] for row in self.entries if len(row) > k]

    def best(self) -> float:
        """The most-extrapolated value: the last diagonal entry."""
        return self.entries[-1][-1]

    def to_csv(self, labels=None) -> str:
        """Full-precision CSV, one row per grid, columns U_{g,0}..U_{g,k}."""
        depth = self.depth
        out = io.StringIO()
        head = ["label"] if labels is not None else []
        out.write(",".join(head + [f"U_{{g,{k}}}" for k in range(depth)]) + "\n")
        for g, row in enumerate(self.entries):
            cells = [str(labels[g])] if labels is not None else []
            cells += [f"{v:.17g}" for v in row]
            cells += [""] * (depth - len(row))
            out.write(",".join(cells) + "\n")
        return out.getvalue()

    def to_text(self, labels=None, decimals: int = 6) -> str:
        """Aligned table rounded for display (6 decimals by default)."""
        depth = self.depth
        width = decimals + 4
        out = io.StringIO()
        head = [f"{'':>8}"] if labels is not None else []
        out.write("".join(head + [f"{f'U_g,{k}':>{width}}" for k in range(depth)]) + "\n")
        for g, row in enumerate(self.entries):
            cells = [f"{labels[g]:>8}"] if labels is not None else []
            cells += [f"{v:>{width}.{decimals}f}" for v in row]
            out.write("".join(cells) + "\n")
        return out.getvalue()


def extrapolate(values, schedule: OrderSchedule | None = None) -> Tableau:
    """Build the repeated-extrapolation tableau from a refinement sequence.

    values[g] is the solution on grid g (coarsest first); column 0 of the
    tableau is exactly this input.
    """
    schedule = schedule or OrderSchedule()
    values = [float(v) for v in values]
    if len(values) < 1:
        raise ParameterError("need at least one value to extrapolate")
    if not all(math.isfinite(v) for v in values):
        raise ParameterError("all input values must be finite")

    rows: list[list[float]] = [[values[0]]]
    for g in range(1, len(values)):
        row = [values[g]]
        prev = rows[g - 1]
        for k in range(g):
            if k >= len(prev):
                break
            row.append(row[k] + (row[k] - prev[k]) / (schedule.gain(k) - 1.0))
        rows.append(row)
    return Tableau(entries=tuple(tuple(r) for r in rows), schedule=schedule)


@dataclass(frozen=True)
class ErrorEstimate:
    """Computable error of the fine solution from an adjacent-grid pair."""

    e_r: float
    e_s: float
    at: object = None


def estimate_error(u_coarse: float, u_fine: float,
                   schedule: OrderSchedule | None = None, at=None) -> ErrorEstimate:
    """Safe estimate e_s = fine - coarse and first-Richardson e_r = e_s/(q^p0 - 1)."""
    schedule = schedule or OrderSchedule()
    if not (math.isfinite(u_coarse) and math.isfinite(u_fine)):
        raise ParameterError("estimate inputs must be finite")
    e_s = u_fine - u_coarse
    e_r = e_s / (schedule.gain(0) - 1.0)
    return ErrorEstimate(e_r=e_r, e_s=e_s, at=at)


def estimate_order(u_coarse: float, u_fine: float, u_ref: float, q: float) -> float:
    """Observed order from two solutions and a reference value.

    p0 ~= [log|U_g - u| - log|U_{g+1} - u|] / log(q); the reference u may be
    exact or a much finer solution.
    """
    if not (math.isfinite(q) and q > 0 and q != 1):
        raise ParameterError(f"refinement ratio must be positive and != 1, got {q!r}")
    err_c = abs(u_coarse - u_ref)
    err_f = abs(u_fine - u_ref)
    if err_c == 0.0 or err_f == 0.0:
        raise ParameterError("zero error against the reference; observed order undefined")
    return (math.log(err_c) - math.log(err_f)) / math.log(q)


def restrict(fine: Solution, coarse: Grid):
    """Sample a fine solution onto a coarser nested grid by pure injection.

    Requires the same truncation point and integer index ratios in both
    directions; returns (p_field, s_f) arrays indexed by the coarse grid.
    The fine solution must have been solved with keep_history=True.
    """
    fg = fine.grid
    if not math.isclose(fg.spec.x_inf, coarse.spec.x_inf, rel_tol=1e-12):
        raise NestingError(
            f"truncation points differ: {fg.spec.x_inf} vs {coarse.spec.x_inf}"
        )
    if fg.J % coarse.J != 0 or fg.N % coarse.N != 0:
        raise NestingError(
            f"fine grid (J={fg.J}, N={fg.N}) is not an exact nesting of "
            f"coarse (J={coarse.J}, N={coarse.N})"
        )
    if fine.history is None:
        raise NestingError("fine solution lacks full history; solve with keep_history=True")
    sj = fg.J // coarse.J
    qn = fg.N // coarse.N
    p_field = fine.history[::qn, ::sj].copy()
    s_f = fine.s_f[::qn].copy()
    return p_field, s_f
