import math

import pytest
from hypothesis import HealthCheck, settings

from efsc.protocol import ProtocolConfig, conditional_states

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def half_pi_states():
    """Conditional states at theta1 = theta2 = pi/2 keyed by alpha."""
    return {a: conditional_states(ProtocolConfig.symmetric(a, math.pi / 2)) for a in (0.5, 1.0, 2.0, 3.0)}
