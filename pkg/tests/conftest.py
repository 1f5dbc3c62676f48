import numpy as np
import pytest

from propermaps.corpus import corpus


@pytest.fixture(scope="session")
def registry():
    return corpus()


@pytest.fixture()
def rng():
    return np.random.default_rng(20140609)


def sample_sphere(n, count, seed=0):
    """Independent sphere sampler used as a numeric oracle in tests."""
    gen = np.random.default_rng(seed)
    g = gen.standard_normal((count, n)) + 1j * gen.standard_normal((count, n))
    return g / np.linalg.norm(g, axis=1)[:, None]
