import pytest
from hypothesis import HealthCheck, settings

from qtl import pcgroup as pc

settings.register_profile("qtl", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("qtl")


@pytest.fixture(scope="session")
def presentations():
    return pc.load_presentations()


@pytest.fixture(scope="session")
def sigma_table(presentations):
    """sigma flags for every shipped presentation, computed once per session."""
    return {name: pc.sigma_flags(p, strict=True) for name, p in presentations.items()}
