"""Independent reference pricers used for cross-validation.

These deliberately share no code with the finite-difference path: a
Cox-Ross-Rubinstein binomial lattice for American (and European) puts, and
the Black-Scholes closed form for the European put.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import LatticeError, ParameterError
from .grid import ModelParams


@dataclass(frozen=True)
class LatticeSpec:
    """Binomial lattice resolution."""

    steps: int

    def __post_init__(self):
        if not (isinstance(self.steps, (int, np.integer)) and self.steps >= 1):
            raise ParameterError(f"steps must be a positive integer, got {self.steps!r}")


def _crr_put(model: ModelParams, S0: float, steps: int, american: bool) -> float:
    if not (isinstance(S0, (int, float)) and math.isfinite(S0) and S0 > 0):
        raise ParameterError(f"S0 must be positive, got {S0!r}")
    dt = model.maturity / steps
    u = math.exp(model.sigma * math.sqrt(dt))
    d = 1.0 / u
    disc = math.exp(-model.r * dt)
    p = (math.exp(model.r * dt) - d) / (u - d)
    if not 0.0 <= p <= 1.0:
        raise LatticeError(
            f"risk-neutral probability {p:.6f} outside [0, 1]; increase steps or sigma"
        )

    # terminal asset prices S0 * u^j * d^(steps-j), j = 0..steps
    j = np.arange(steps + 1)
    S = S0 * u ** j * d ** (steps - j)
    V = np.maximum(model.strike - S, 0.0)
    for _ in range(steps):
        V = disc * (p * V[1:] + (1.0 - p) * V[:-1])
        S = S[:-1] * u
        if american:
            V = np.maximum(V, model.strike - S)
    return float(V[0])


def crr_american_put(model: ModelParams, S0: float, lattice: LatticeSpec) -> float:
    """American put by backward induction with the early-exercise max at every node."""
    return _crr_put(model, S0, lattice.steps, american=True)


def crr_european_put(model: ModelParams, S0: float, lattice: LatticeSpec) -> float:
    """Same lattice with early exercise disabled; lower bound for the American price."""
    return _crr_put(model, S0, lattice.steps, american=False)


def _norm_cdf(x: float) -> float:
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def black_scholes_european_put(model: ModelParams, S0: float, tau: float) -> float:
    """Closed-form European put value; tau = 0 returns the payoff."""
    if not (isinstance(S0, (int, float)) and math.isfinite(S0) and S0 > 0):
        raise ParameterError(f"S0 must be positive, got {S0!r}")
    if not (isinstance(tau, (int, float)) and math.isfinite(tau) and tau >= 0):
        raise ParameterError(f"tau must be non-negative, got {tau!r}")
    E = model.strike
    if tau == 0.0:
        return max(E - S0, 0.0)
    vol = model.sigma * math.sqrt(tau)
    d1 = (math.log(S0 / E) + (model.r + 0.5 * model.sigma**2) * tau) / vol
    d2 = d1 - vol
    return E * math.exp(-model.r * tau) * _norm_cdf(-d2) - S0 * _norm_cdf(-d1)
