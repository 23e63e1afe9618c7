import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from specbounds.models import box_spectrum, oscillator_spectrum

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

PI2 = math.pi**2


@pytest.fixture(scope="session")
def interval():
    return box_spectrum([1.0], 600)


@pytest.fixture(scope="session")
def square():
    return box_spectrum([1.0, 1.0], 600)


@pytest.fixture(scope="session")
def model_spectra():
    return {
        "box-1": box_spectrum([1.0], 600),
        "box-2": box_spectrum([1.0, 1.0], 600),
        "box-3": box_spectrum([1.0, 1.0, 1.0], 600),
        "osc-1": oscillator_spectrum(1, 600),
        "osc-2": oscillator_spectrum(2, 600),
    }


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
