import numpy as np
import pytest

from stratlearn import ClassificationEnv, PricingEnv


@pytest.fixture
def cls_env() -> ClassificationEnv:
    return ClassificationEnv()


@pytest.fixture
def prc_env() -> PricingEnv:
    return PricingEnv()


@pytest.fixture
def rng():
    return np.random.default_rng(20260814)
