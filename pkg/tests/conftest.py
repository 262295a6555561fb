import pytest

from frontfix import GridSpec, ModelParams, build_grid


@pytest.fixture(scope="session")
def paper_model():
    """The r=0.1, sigma=0.2, E=T=1 benchmark setting."""
    return ModelParams(r=0.1, sigma=0.2, strike=1.0, maturity=1.0)


@pytest.fixture(scope="session")
def paper_grid(paper_model):
    """The accepted benchmark grid: J=80, mu=20, x_inf=1 (N=320)."""
    return build_grid(paper_model, GridSpec(x_inf=1.0, J=80, mu=20.0))
