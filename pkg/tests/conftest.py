import numpy as np
import pytest

from acaom.selftest import random_model, random_stable_model  # noqa: F401


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
