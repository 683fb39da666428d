import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from wienerhopf import FreeGroup, NicaAlgebra, WienerHopfGroupoid, default_action

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=25, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def F2():
    return FreeGroup(2)


@pytest.fixture(scope="session")
def act():
    return default_action(2)


@pytest.fixture(scope="session")
def T(act):
    return NicaAlgebra(act)


@pytest.fixture(scope="session")
def G(act):
    return WienerHopfGroupoid(act)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
