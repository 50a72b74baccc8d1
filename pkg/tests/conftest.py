import numpy as np
import pytest

from wvlab import accel


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    # compile jitted kernels once so per-test timings stay honest
    accel.warm_up()


@pytest.fixture()
def rng():
    return np.random.default_rng(20250825)
