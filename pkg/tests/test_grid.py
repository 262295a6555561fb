import math

import numpy as np
import pytest

from frontfix import (
    GridSpec,
    ModelParams,
    ParameterError,
    build_grid,
    check_stability,
    step_coefficients,
)


class TestBuildGrid:
    def test_benchmark_grid(self, paper_model):
        g = build_grid(paper_model, GridSpec(x_inf=1.0, J=80, mu=20.0))
        assert g.dx == 0.0125
        assert g.N == 320
        assert g.dt == pytest.approx(0.003125, abs=0)

    def test_coarsest_table_row(self, paper_model):
        g = build_grid(paper_model, GridSpec(x_inf=1.0, J=10, mu=20.0))
        assert g.dx == 0.1
        assert g.dt == 0.2
        assert g.N == 5

    def test_fine_unit_ratio(self, paper_model):
        g = build_grid(paper_model, GridSpec(x_inf=1.0, J=1000, mu=1.0))
        assert g.dx == 0.001
        assert g.N == 1_000_000
        assert g.dt == pytest.approx(1e-6, rel=1e-12)

    def test_nodes(self, paper_model):
        g = build_grid(paper_model, GridSpec(x_inf=1.0, J=10, mu=20.0))
        np.testing.assert_array_equal(g.x_nodes, np.arange(11) * 0.1)
        np.testing.assert_array_equal(g.t_nodes, np.arange(6) * 0.2)
        assert g.x_nodes[-1] == g.spec.x_inf
        assert g.t_nodes[-1] == paper_model.maturity

    def test_ceiling_rounds_up_non_integer_counts(self, paper_model):
        # T/(mu dx^2) = 1/(7 * (1/13)^2) = 169/7 = 24.14... -> N = 25
        g = build_grid(paper_model, GridSpec(x_inf=1.0, J=13, mu=7.0))
        assert g.N == 25
        assert g.dt == 1.0 / 25

    def test_deterministic_and_bit_identical(self, paper_model):
        spec = GridSpec(x_inf=1.0, J=80, mu=20.0)
        g1 = build_grid(paper_model, spec)
        g2 = build_grid(paper_model, spec)
        assert g1.dx == g2.dx and g1.dt == g2.dt and g1.N == g2.N
        np.testing.assert_array_equal(g1.x_nodes, g2.x_nodes)
        np.testing.assert_array_equal(g1.t_nodes, g2.t_nodes)

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(x_inf=0.0, J=10, mu=20.0),
            dict(x_inf=-1.0, J=10, mu=20.0),
            dict(x_inf=1.0, J=2, mu=20.0),
            dict(x_inf=1.0, J=10, mu=0.0),
            dict(x_inf=1.0, J=10, mu=-3.0),
        ],
    )
    def test_invalid_spec(self, kwargs):
        with pytest.raises(ParameterError):
            GridSpec(**kwargs)

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(r=0.0, sigma=0.2, strike=1.0, maturity=1.0),
            dict(r=0.1, sigma=-0.2, strike=1.0, maturity=1.0),
            dict(r=0.1, sigma=0.2, strike=0.0, maturity=1.0),
            dict(r=0.1, sigma=0.2, strike=1.0, maturity=float("nan")),
        ],
    )
    def test_invalid_model(self, kwargs):
        with pytest.raises(ParameterError):
            ModelParams(**kwargs)


class TestCheckStability:
    def test_benchmark_grid_passes(self, paper_model, paper_grid):
        rep = check_stability(paper_model, paper_grid)
        assert rep.dx_limit == pytest.approx(0.04 / 0.08)
        assert rep.dt_limit == pytest.approx(
            0.0125**2 / (0.04 + 0.1 * 0.0125**2), rel=1e-12
        )
        assert rep.dx_bound_ok and rep.dt_bound_ok and rep.coefficients_nonneg

    def test_unstable_time_step_detected(self, paper_model):
        # closest integer-J realization of the N=100, mu=27 instability run
        g = build_grid(paper_model, GridSpec(x_inf=1.0, J=52, mu=27.0))
        rep = check_stability(paper_model, g)
        assert rep.dx_bound_ok
        assert not rep.dt_bound_ok
        assert g.dt > rep.dt_limit
        assert not rep.coefficients_nonneg

    def test_degenerate_drift_skips_dx_bound(self):
        # r = sigma^2/2 exactly: only the dt bound applies
        m = ModelParams(r=0.02, sigma=0.2, strike=1.0, maturity=1.0)
        g = build_grid(m, GridSpec(x_inf=1.0, J=10, mu=20.0))
        rep = check_stability(m, g)
        assert rep.dx_bound_ok
        assert math.isinf(rep.dx_limit)
        assert rep.coefficients_nonneg == rep.dt_bound_ok

    def test_nonnegative_coefficients_follow_from_report(self):
        rng = np.random.default_rng(7)
        for _ in range(30):
            r = float(rng.uniform(0.01, 0.3))
            sigma = float(rng.uniform(0.1, 0.5))
            m = ModelParams(r=r, sigma=sigma, strike=1.0, maturity=1.0)
            dx_lim = (
                sigma**2 / abs(r - sigma**2 / 2)
                if abs(r - sigma**2 / 2) > 1e-14
                else math.inf
            )
            j_min = max(10, int(math.ceil(1.0 / dx_lim)) + 1)
            J = int(rng.integers(j_min, j_min + 90))
            dx = 1.0 / J
            mu = float(rng.uniform(0.2, 0.95)) / (sigma**2 + r * dx * dx)
            g = build_grid(m, GridSpec(x_inf=1.0, J=J, mu=mu))
            rep = check_stability(m, g)
            assert rep.coefficients_nonneg
            c = step_coefficients(m, g)
            assert c.a >= 0 and c.b >= 0 and c.c >= 0
