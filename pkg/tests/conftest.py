"""Shared fixtures and deterministic hypothesis settings."""

import pytest
from hypothesis import HealthCheck, settings

from slindef import (
    Piece,
    PiecewiseCoefficient,
    ProblemSpec,
    application_problem,
    one_turning_point,
    two_turning_point,
)

settings.register_profile(
    "suite",
    max_examples=60,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def classical_spec() -> ProblemSpec:
    """w = 1, q = 0 on [0, 1], Dirichlet: eigenvalues are (n pi)^2."""
    return ProblemSpec(PiecewiseCoefficient((Piece(0.0, 1.0, 1.0, 0.0),)))


@pytest.fixture(scope="session")
def one_tp_m10() -> ProblemSpec:
    return one_turning_point(-10.0)


@pytest.fixture(scope="session")
def one_tp_p13() -> ProblemSpec:
    return one_turning_point(13.0)


@pytest.fixture(scope="session")
def two_tp_q0() -> ProblemSpec:
    return two_turning_point(-1.0, 1.0, -1.0, 0.0)


@pytest.fixture(scope="session")
def app_spec() -> ProblemSpec:
    return application_problem(0.0)
