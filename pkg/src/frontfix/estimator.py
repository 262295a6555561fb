"""Scikit-learn style wrapper around the front-fixing solver.

Exposes the pricer as an estimator so it slots into sklearn tooling
(get_params/set_params, clone, grid search over discretization settings).
fit() runs the PDE solve; predict() maps (asset price, time-to-maturity)
pairs to option values.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .grid import GridSpec, ModelParams, build_grid
from .solver import SolveOptions, price_at, solve


class AmericanPutPricer(BaseEstimator):
    """American put valuation by the front-fixing explicit scheme.

    Parameters mirror the market model (r, sigma, strike, maturity) and the
    discretization (x_inf, J, mu). After fit(), `solution_` holds the full
    march, `boundary_times_` / `boundary_` the early-exercise boundary in
    currency units, and predict() values arbitrary (S, tau) pairs.
    """

    def __init__(self, r=0.1, sigma=0.2, strike=1.0, maturity=1.0,
                 x_inf=1.0, J=80, mu=20.0, force=False):
        self.r = r
        self.sigma = sigma
        self.strike = strike
        self.maturity = maturity
        self.x_inf = x_inf
        self.J = J
        self.mu = mu
        self.force = force

    def fit(self, X=None, y=None):
        """Solve the free-boundary problem; X and y are ignored."""
        model = ModelParams(r=self.r, sigma=self.sigma,
                            strike=self.strike, maturity=self.maturity)
        grid = build_grid(model, GridSpec(x_inf=self.x_inf, J=int(self.J), mu=self.mu))
        # full history so predict() can snap to any time level
        self.solution_ = solve(model, grid, SolveOptions(force=self.force, keep_history=True))
        self.model_ = model
        self.grid_ = grid
        self.boundary_times_ = grid.t_nodes.copy()
        self.boundary_ = self.strike * self.solution_.s_f.copy()
        return self

    def predict(self, X):
        """Option values for rows (S, tau) of X."""
        check_is_fitted(self, "solution_")
        X = check_array(X, ensure_2d=True, dtype=np.float64)
        if X.shape[1] != 2:
            raise ValueError(f"expected 2 columns (S, tau), got {X.shape[1]}")
        return np.array([price_at(self.solution_, float(s), float(tau)).P
                         for s, tau in X])

    def exercise_boundary(self):
        """(times, boundary asset prices) of the early-exercise frontier."""
        check_is_fitted(self, "solution_")
        return self.boundary_times_, self.boundary_
