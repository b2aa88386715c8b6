import numpy as np
import pytest

from tpvm.model import Image, TargetSet


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)


def rand_image(rng, width=4, height=4):
    return Image.from_flat(width, height, rng.random(width * height))


def rand_targets(rng, k=2, width=4, height=4):
    return TargetSet(tuple(rand_image(rng, width, height) for _ in range(k)))
