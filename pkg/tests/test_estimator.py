import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from frontfix import AmericanPutPricer, StabilityError, price_at


@pytest.fixture(scope="module")
def fitted():
    return AmericanPutPricer(J=80, mu=20.0).fit()


class TestAmericanPutPricer:
    def test_get_params_roundtrip(self):
        est = AmericanPutPricer(r=0.05, sigma=0.3, J=40)
        params = est.get_params()
        assert params["r"] == 0.05 and params["sigma"] == 0.3 and params["J"] == 40
        est2 = AmericanPutPricer(**params)
        assert est2.get_params() == params

    def test_clone(self):
        est = AmericanPutPricer(J=40).fit()
        fresh = clone(est)
        assert fresh.get_params() == est.get_params()
        assert not hasattr(fresh, "solution_")

    def test_predict_requires_fit(self):
        with pytest.raises(NotFittedError):
            AmericanPutPricer().predict([[1.0, 1.0]])

    def test_predict_matches_functional_api(self, fitted):
        X = np.array([[0.9, 1.0], [1.0, 1.0], [1.1, 0.5]])
        preds = fitted.predict(X)
        for (S, tau), p in zip(X, preds):
            assert p == price_at(fitted.solution_, float(S), float(tau)).P

    def test_predict_shape_validation(self, fitted):
        with pytest.raises(ValueError):
            fitted.predict(np.ones((3, 3)))

    def test_exercise_boundary_monotone(self, fitted):
        times, boundary = fitted.exercise_boundary()
        assert times.shape == boundary.shape
        assert boundary[0] == fitted.strike
        assert np.all(np.diff(boundary) <= 0.0)

    def test_unstable_grid_raises_unless_forced(self):
        with pytest.raises(StabilityError):
            AmericanPutPricer(J=52, mu=27.0).fit()

    def test_strike_scaling(self):
        a = AmericanPutPricer(strike=1.0, J=40).fit()
        b = AmericanPutPricer(strike=2.0, J=40).fit()
        pa = a.predict([[1.0, 1.0]])[0]
        pb = b.predict([[2.0, 1.0]])[0]
        assert pb == pytest.approx(2 * pa, rel=1e-12)
