import itertools

import numpy as np
import pytest

from markov.chain.core import build_chain
from markov.chain.generators import cycle, lazy_cycle, path, random_reversible

CORPUS_SIZE = 200


def corpus_chains():
    """Seeded random reversible chains with 3 to 10 states."""
    chains = []
    for seed in range(CORPUS_SIZE):
        size = 3 + seed % 8
        density = 1.0 if seed % 3 else 0.5
        chains.append(build_chain(random_reversible(size, seed=seed, density=density)))
    return chains


def brute_force_values(chain, n=1):
    """k_n(A) for every nonempty proper subset, computed from scratch."""
    p_n = np.linalg.matrix_power(np.asarray(chain.p), n)
    pi = np.asarray(chain.weights)
    values = {}
    states = range(chain.n_states)
    for size in range(1, chain.n_states):
        for subset in itertools.combinations(states, size):
            inside = set(subset)
            outside = [y for y in states if y not in inside]
            flow = sum(pi[x] * p_n[x, y] for x in subset for y in outside)
            mass = sum(pi[x] for x in subset)
            values[frozenset(subset)] = (flow / (mass * (1.0 - mass)), mass)
    return values


@pytest.fixture(scope="session")
def corpus():
    return corpus_chains()


@pytest.fixture
def four_cycle():
    return build_chain(cycle(4))


@pytest.fixture
def lazy_four_cycle():
    return build_chain(lazy_cycle(4, hold=0.5))


@pytest.fixture
def swap_chain():
    return build_chain(cycle(2))


@pytest.fixture
def six_cycle():
    return build_chain(cycle(6))


@pytest.fixture
def path_eight():
    return build_chain(path(8))


@pytest.fixture
def directed_cycle():
    return build_chain([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]])
