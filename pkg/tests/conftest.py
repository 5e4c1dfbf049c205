"""Shared fixtures: the randomized corpus and a few small reference systems."""

import numpy as np
import pytest

import wavechain as w

CORPUS_SEED = 20260816
CORPUS_COUNT = 200


def random_system(rng):
    size = int(rng.integers(3, 10))
    m = rng.random((size, size))
    m *= rng.random((size, size)) < 0.6
    # a guaranteed cycle keeps the base kernel irreducible
    m[np.arange(size), (np.arange(size) + 1) % size] += 0.25
    m /= m.sum(axis=1, keepdims=True)
    g = [int(v) for v in rng.permutation(size)]
    space = w.StateSpace(size)
    return w.make_wave_system(
        w.make_kernel(space, m), w.make_permutation(space, g)
    )


@pytest.fixture(scope="session")
def corpus():
    rng = np.random.default_rng(CORPUS_SEED)
    return [random_system(rng) for _ in range(CORPUS_COUNT)]


@pytest.fixture(scope="session")
def merging_corpus(corpus):
    """Corpus members whose shifted kernel is irreducible and aperiodic."""
    kept = [
        s
        for s in corpus
        if w.is_irreducible(s.shifted) and w.period(s.shifted) == 1
    ]
    assert len(kept) == 184  # frozen at the corpus seed
    return kept


@pytest.fixture(scope="session")
def circle5():
    base, _ = w.circle_kernel(5, 1.0)
    return w.make_wave_system(base, w.circle_shift(5, -1))


@pytest.fixture(scope="session")
def sticky4():
    return w.sticky_permutation_system(4, (0, 1, 2, 3), 0.1)
