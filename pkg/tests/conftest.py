from fractions import Fraction as F
from pathlib import Path

import numpy as np
import pytest

from kemeny_lab import chain
from kemeny_lab import numerics as nx

DATA = Path(__file__).resolve().parents[1] / "src" / "kemeny_lab" / "data"
GOLDEN = Path(__file__).resolve().parent / "golden"

OZ = [[F(1, 2), F(1, 4), F(1, 4)],
      [F(1, 2), F(0), F(1, 2)],
      [F(1, 4), F(1, 4), F(1, 2)]]
OZ_PI = [F(2, 5), F(1, 5), F(2, 5)]
OZ_M = [[F(5, 2), F(4), F(10, 3)],
        [F(8, 3), F(5), F(8, 3)],
        [F(10, 3), F(4), F(5, 2)]]
OZ_MBAR_INV = [[F(-3, 20), F(3, 16), F(3, 20)],
               [F(1, 8), F(-5, 32), F(1, 8)],
               [F(3, 20), F(3, 16), F(-3, 20)]]
OZ_K = F(47, 15)


def exact(rows):
    return nx.to_exact(np.array(rows, dtype=object))


def random_weights(rng, n, zero_prob=0.3):
    """Integer weights 0..9 with every row nonzero."""
    while True:
        w = rng.integers(1, 10, size=(n, n))
        w[rng.random((n, n)) < zero_prob] = 0
        if (w.sum(axis=1) > 0).all():
            return w


def random_regular_chain(rng, n, exact_mode=True):
    """A random regular chain with rational entries (or their float images)."""
    while True:
        w = random_weights(rng, n)
        rows = [[F(int(x), int(row.sum())) for x in row] for row in w]
        p = chain.validate(exact(rows))
        if chain.primitivity(p).is_regular:
            return p if exact_mode else chain.validate(nx.to_float(p.matrix))


def regular_corpus(seed=2024, count=200, sizes=range(2, 9)):
    rng = np.random.default_rng(seed)
    sizes = list(sizes)
    return [random_regular_chain(rng, sizes[i % len(sizes)]) for i in range(count)]


@pytest.fixture
def oz():
    return chain.validate(exact(OZ))


@pytest.fixture
def oz_float():
    return chain.validate(nx.to_float(exact(OZ)))


@pytest.fixture
def two_state():
    return chain.validate(exact([[F(1, 2), F(1, 2)], [F(1, 2), F(1, 2)]]))


@pytest.fixture(scope="session")
def corpus():
    return regular_corpus()
