import math

import numpy as np
import pytest

from heiscurves import HelixParams, biharmonic_helix, sample_curve

FIGURE1_COS = 3.0 / math.sqrt(10.0)
FIGURE1_ALPHA0 = math.acos(FIGURE1_COS)

# Frozen oracle values for the figure-parameter helix (plus branch), computed
# from the quadratic root A = (cos(a0) + sqrt(5 cos(a0)^2 - 4)) / 2 and the
# closed forms k = sin(a0)(cos(a0) - A), tau = -(cos(a0) A + 1/2 - cos(a0)^2).
FIGURE1_A = 0.8278950396185307
FIGURE1_K = 0.0381966011250105
FIGURE1_TAU = -0.38541019662496856
FIGURE1_B3 = -0.31622776601683805


@pytest.fixture(scope="session")
def figure1_hp():
    return HelixParams(alpha0=FIGURE1_ALPHA0, branch="plus")


@pytest.fixture(scope="session")
def figure1_samples(figure1_hp):
    spec = biharmonic_helix(figure1_hp, (0.0, 10.0 * math.pi))
    return sample_curve(spec, 2001)


def random_domain_point(rng: np.random.Generator, m: float, scale: float = 3.0):
    """A point safely inside the chart (needed when m < 0)."""
    if m < 0.0:
        radius = 0.6 / math.sqrt(-m)
        xy = rng.uniform(-radius / math.sqrt(2.0), radius / math.sqrt(2.0), 2)
        z = rng.uniform(-scale, scale)
        return np.array([xy[0], xy[1], z])
    return rng.uniform(-scale, scale, 3)
