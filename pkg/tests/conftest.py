import math
import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from lorentz_bounds import model_space as ms
from lorentz_bounds.finite_space import Diamond, geodesic_lattice, hub_preset, sprinkle

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", deadline=None, max_examples=300)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def random_motion(K, rng):
    """A random time-orientation preserving isometry of L^2(K)."""
    g = ms.boost(K, rng.uniform(-1.0, 1.0))
    if K == 0:
        return g.compose(ms.translation(K, *rng.uniform(-2, 2, size=2)))
    return g.compose(ms.rotation(K, rng.uniform(-math.pi, math.pi)))


def random_chrono_pair(K, rng, max_len=None):
    """(p, q, tau) with p << q placed by a random motion."""
    D = ms.finite_diameter(K)
    top = min(3.0, 0.95 * D) if max_len is None else max_len
    L = rng.uniform(0.05, top)
    g = random_motion(K, rng)
    p = ms.apply_isometry(K, g, ms.base_point(K))
    q = ms.apply_isometry(K, g, ms.exp_base(K, L, rng.uniform(-1.5, 1.5)))
    return p, q, L


@pytest.fixture(scope="session")
def lattices():
    return {K: geodesic_lattice(K, hub_preset(K, "diamond", 2.0), 4) for K in (0.0, 1.0, -1.0)}


@pytest.fixture(scope="session")
def flat_sprinkle():
    return sprinkle(0.0, Diamond(2.0), 40, 7)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# one line per acceptance criterion, printed after the run
_ACCEPTANCE = pytest.StashKey[dict]()


@pytest.fixture
def acceptance_log(request):
    return request.config.stash.setdefault(_ACCEPTANCE, {})


def pytest_terminal_summary(terminalreporter):
    lines = terminalreporter.config.stash.get(_ACCEPTANCE, {})
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(lines, key=lambda k: (int(k.rstrip("m")), k)):
        terminalreporter.write_line(lines[key])
