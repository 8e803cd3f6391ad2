import numpy as np
import pytest

from kpbox import make_scatterer_set


def random_instance(rng, M=None, L=None, h_range=(-0.5, 1.5)):
    """A random valid instance: positions strictly inside, generic heights."""
    M = int(rng.integers(0, 7)) if M is None else M
    L = float(rng.uniform(1.5, 8.0)) if L is None else L
    pos = np.sort(rng.uniform(-L / 2 * 0.95, L / 2 * 0.95, M))
    while M and np.min(np.diff(pos), initial=np.inf) < 1e-3 * L:
        pos = np.sort(rng.uniform(-L / 2 * 0.95, L / 2 * 0.95, M))
    hts = rng.uniform(*h_range, M)
    return make_scatterer_set(L, pos, hts)


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)
