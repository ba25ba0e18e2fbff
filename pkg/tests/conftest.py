import pytest
from hypothesis import HealthCheck, settings

from rydion.model import BASIS

settings.register_profile(
    "suite", max_examples=25, deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def sr():
    from rydion.species import get_species
    return get_species("Sr+")


@pytest.fixture(scope="session")
def psi0():
    return BASIS.superposition(*[(lab, 0.5) for lab in ("00", "01", "10", "11")])


@pytest.fixture(scope="session")
def app_h_states(sr):
    """The five fine-structure states of the n = 46 golden-value set."""
    from rydion.atomic import ElectronicState
    return {
        0: ElectronicState(5, 0, 0.5, -0.5),    # 5S1/2(-1/2)
        1: ElectronicState(4, 2, 2.5, -2.5),    # 4D5/2(-5/2)
        2: ElectronicState(6, 1, 1.5, -1.5),    # 6P3/2(-3/2)
        3: ElectronicState(46, 0, 0.5, -0.5),   # 46S1/2(-1/2)
        4: ElectronicState(46, 1, 0.5, +0.5),   # 46P1/2(+1/2)
    }
