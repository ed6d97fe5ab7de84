import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from sta_qutrit import ScheduleParams

settings.register_profile(
    "default",
    deadline=None,
    max_examples=50,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

PI = np.pi


@pytest.fixture
def fig3_params():
    """Off-resonant transfer configuration."""
    return ScheduleParams(tau1=0.115, tau2=0.3, gamma0=0.15 * PI, phi=0.25 * PI)


@pytest.fixture
def fig4_params():
    """Resonant transfer configuration."""
    return ScheduleParams(tau1=0.115, tau2=0.3, gamma0=0.15 * PI, phi=0.5 * PI)


@pytest.fixture
def fig5_params():
    """Metrics-optimum configuration."""
    return ScheduleParams(tau1=0.12, tau2=0.3, gamma0=0.3 * PI, phi=0.5 * PI)


@pytest.fixture
def default_params():
    """Robust operating point used by the noise sweeps."""
    return ScheduleParams(tau1=0.12, tau2=0.3, gamma0=0.15 * PI, phi=0.5 * PI)
