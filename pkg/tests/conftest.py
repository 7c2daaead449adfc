import pytest

from contrex import domains
from contrex.solver import SolveParams, solve


@pytest.fixture(scope="session")
def kp_micro():
    return domains.load_fixture("kp-micro")


@pytest.fixture(scope="session")
def kp_micro_model(kp_micro):
    return domains.build_model(kp_micro)


@pytest.fixture(scope="session")
def kp_micro_solved(kp_micro_model):
    result = solve(kp_micro_model, SolveParams(time_limit=10))
    assert result.status == "Optimal"
    return result


@pytest.fixture(scope="session")
def tap_micro():
    return domains.load_fixture("tap-micro")
