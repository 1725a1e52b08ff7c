import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def rel_err(got, want) -> float:
    scale = abs(want)
    if scale == 0.0:
        return abs(got)
    return abs(got - want) / scale
