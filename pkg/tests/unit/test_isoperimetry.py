import time

import numpy as np
import pytest

from markov.chain.core import build_chain
from markov.chain.generators import random_reversible
from markov.errors import DomainError, EmptyFamily, StateSpaceTooLarge
from markov.isoperimetry.constants import K_sup, k_inf
from markov.isoperimetry.cuts import (
    Family,
    Mode,
    Objective,
    StateSubset,
    escape_fractions,
    flow_out,
    k_of_set,
    naive_extremum,
)
from markov.isoperimetry.enumeration import CutEnumerator, exact_extremum, gray_flips, internal_sums, subset_sums
from markov.settings import EnumerationSettings

from tests.unit.conftest import brute_force_values

# small blocks so that the Gray-code walk and the task split are exercised on small chains
WALKING = EnumerationSettings(block_bits=3, split_bits=2)


def test_family_aliases():
    assert Family.parse("strict") is Family.STRICT_HALF
    assert Family.parse("closed") is Family.CLOSED_HALF
    assert Family.parse("all-proper") is Family.ALL_PROPER
    with pytest.raises(ValueError):
        Family.parse("half")


def test_state_subset_constructors(four_cycle):
    subset = StateSubset.from_states(four_cycle, [0, 2])
    assert subset.mask == 0b0101
    assert subset.states == (0, 2)
    assert subset.mass == pytest.approx(0.5)
    assert subset.complement(four_cycle).states == (1, 3)
    with pytest.raises(DomainError):
        StateSubset.from_states(four_cycle, [])
    with pytest.raises(DomainError):
        StateSubset.from_states(four_cycle, [0, 1, 2, 3])
    with pytest.raises(DomainError):
        StateSubset.from_states(four_cycle, [4])


def test_k_of_set_on_the_four_cycle(four_cycle):
    assert k_of_set(four_cycle, StateSubset.from_states(four_cycle, [0])) == pytest.approx(4 / 3)
    assert k_of_set(four_cycle, StateSubset.from_states(four_cycle, [0, 1])) == pytest.approx(1.0)
    assert k_of_set(four_cycle, StateSubset.from_states(four_cycle, [0, 2])) == pytest.approx(2.0)
    assert k_of_set(four_cycle, StateSubset.from_states(four_cycle, [0, 2]), n=2) == pytest.approx(0.0, abs=1e-15)


def test_flow_out_equals_flow_in(path_eight):
    subset = StateSubset.from_states(path_eight, [1, 2, 6])
    assert flow_out(path_eight, subset) == pytest.approx(flow_out(path_eight, subset.complement(path_eight)))


def test_escape_fractions(lazy_four_cycle):
    subset = StateSubset.from_states(lazy_four_cycle, [0, 1])
    alpha, beta = escape_fractions(lazy_four_cycle, subset)
    assert alpha == pytest.approx(0.25)
    assert beta == pytest.approx(0.25)
    assert alpha / 0.5 == pytest.approx(k_of_set(lazy_four_cycle, subset))


def test_subset_and_internal_sums():
    values = np.array([1.0, 2.0, 4.0])
    np.testing.assert_array_equal(subset_sums(values), np.arange(8.0))

    flow = np.arange(9.0).reshape(3, 3)
    sums = internal_sums(flow)
    for mask in range(8):
        members = [i for i in range(3) if mask >> i & 1]
        assert sums[mask] == pytest.approx(flow[np.ix_(members, members)].sum())


def test_gray_flips_visit_every_subset_once():
    mask, seen = 0, {0}
    for bit in gray_flips(5):
        mask ^= 1 << bit
        seen.add(mask)
    assert seen == set(range(32))


@pytest.mark.parametrize("settings", [EnumerationSettings(), WALKING])
def test_four_cycle_constants(four_cycle, settings):
    assert k_inf(four_cycle, 1, Family.STRICT_HALF, settings).value == pytest.approx(4 / 3, abs=1e-12)
    assert k_inf(four_cycle, 1, Family.CLOSED_HALF, settings).value == pytest.approx(1.0, abs=1e-12)
    K = K_sup(four_cycle, settings)
    assert K.value == pytest.approx(2.0, abs=1e-12)
    assert K.subset.mass == pytest.approx(0.5)
    assert k_inf(four_cycle, 2, Family.CLOSED_HALF, settings).value == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("settings", [EnumerationSettings(), WALKING])
def test_lazy_four_cycle_constants(lazy_four_cycle, settings):
    strict = k_inf(lazy_four_cycle, 1, Family.STRICT_HALF, settings)
    assert strict.value == pytest.approx(2 / 3, abs=1e-12)
    assert len(strict.subset.states) == 1

    closed = k_inf(lazy_four_cycle, 1, Family.CLOSED_HALF, settings)
    assert closed.value == pytest.approx(0.5, abs=1e-12)
    assert closed.subset.mass <= 0.5 + 1e-12
    assert closed.exact and closed.mode is Mode.EXACT

    K = K_sup(lazy_four_cycle, settings)
    assert K.value == pytest.approx(1.0, abs=1e-12)
    assert set(K.subset.states) in ({0, 2}, {1, 3})
    assert k_inf(lazy_four_cycle, 2, Family.CLOSED_HALF, settings).value == pytest.approx(0.75, abs=1e-12)


def test_path_constants(path_eight):
    closed = k_inf(path_eight, 1, Family.CLOSED_HALF)
    assert closed.value == pytest.approx(2 / 7, abs=1e-12)
    assert set(closed.subset.states) in ({0, 1, 2, 3}, {4, 5, 6, 7})
    assert k_inf(path_eight, 1, Family.STRICT_HALF).value == pytest.approx(14 / 45, abs=1e-12)


def test_swap_chain_has_an_empty_strict_family(swap_chain):
    with pytest.raises(EmptyFamily) as excinfo:
        k_inf(swap_chain, 1, Family.STRICT_HALF)
    assert excinfo.value.closed_value == pytest.approx(2.0)
    assert K_sup(swap_chain).value == pytest.approx(2.0)


def test_exact_matches_brute_force_on_fixtures(four_cycle, lazy_four_cycle, six_cycle, path_eight):
    for chain in (four_cycle, lazy_four_cycle, six_cycle, path_eight):
        for n in (1, 2, 3):
            values = brute_force_values(chain, n)
            closed = min(value for value, mass in values.values() if mass <= 0.5 + 1e-12)
            largest = max(value for value, _ in values.values())
            assert k_inf(chain, n, Family.CLOSED_HALF, WALKING).value == pytest.approx(closed, abs=1e-12)
            assert exact_extremum(chain, n, Family.ALL_PROPER, Objective.MAX, WALKING).value == pytest.approx(
                largest, abs=1e-12)


def test_gray_code_matches_naive_scan(corpus):
    for chain in corpus:
        if chain.n_states > 10:
            continue
        for family, objective in ((Family.CLOSED_HALF, Objective.MIN), (Family.STRICT_HALF, Objective.MIN),
                                  (Family.ALL_PROPER, Objective.MAX)):
            expected = naive_extremum(chain, 1, family, objective)
            for settings in (EnumerationSettings(), WALKING):
                actual = exact_extremum(chain, 1, family, objective, settings)
                assert actual.value == pytest.approx(expected.value, abs=1e-12)
                assert k_of_set(chain, actual.subset) == pytest.approx(actual.value, abs=1e-12)


def test_witness_lies_in_its_family(corpus):
    for chain in corpus[:40]:
        closed = k_inf(chain, 1, Family.CLOSED_HALF, WALKING)
        assert 0 < closed.subset.mass <= 0.5 + 1e-12
        strict = k_inf(chain, 1, Family.STRICT_HALF, WALKING)
        assert 0 < strict.subset.mass < 0.5


def test_parallel_and_serial_reports_are_identical():
    chain = build_chain(random_reversible(12, seed=5))
    serial = EnumerationSettings(block_bits=6, split_bits=3, max_workers=1)
    parallel = serial.replace(max_workers=4)
    assert CutEnumerator(chain, 1, parallel).task_count == 8
    for n in (1, 2):
        for family, objective in ((Family.CLOSED_HALF, Objective.MIN), (Family.ALL_PROPER, Objective.MAX)):
            assert exact_extremum(chain, n, family, objective, serial) == exact_extremum(
                chain, n, family, objective, parallel)


def test_too_many_states_for_exact_enumeration():
    chain = build_chain(random_reversible(30, seed=1))
    with pytest.raises(StateSpaceTooLarge):
        k_inf(chain)
    with pytest.raises(StateSpaceTooLarge):
        K_sup(chain)


def test_heuristic_bounds_are_one_sided(corpus):
    for chain in corpus[:60]:
        exact_k = k_inf(chain).value
        exact_K = K_sup(chain).value
        heuristic_k = k_inf(chain, heuristic=True)
        heuristic_K = K_sup(chain, heuristic=True)
        assert heuristic_k.mode is not Mode.EXACT
        assert heuristic_k.value >= exact_k - 1e-12
        assert heuristic_K.value <= exact_K + 1e-12


def test_heuristic_on_a_large_chain():
    chain = build_chain(random_reversible(30, seed=1))
    report = k_inf(chain, heuristic=True)
    assert 0 < report.value <= 2
    assert report.subset.mass <= 0.5 + 1e-12
    assert 0 < K_sup(chain, heuristic=True).value <= 2


def test_enumeration_of_twenty_states_is_fast():
    chain = build_chain(random_reversible(20, seed=11))
    start = time.perf_counter()
    k = k_inf(chain)
    K = K_sup(chain)
    k2 = k_inf(chain, 2)
    assert time.perf_counter() - start < 60
    assert 0 < k.value <= K.value <= 2
    assert 0 <= k2.value <= 2


def test_gray_code_is_faster_than_naive_scan():
    chain = build_chain(random_reversible(16, seed=2))
    start = time.perf_counter()
    fast = exact_extremum(chain, 1, Family.CLOSED_HALF, Objective.MIN)
    fast_time = time.perf_counter() - start

    start = time.perf_counter()
    slow = naive_extremum(chain, 1, Family.CLOSED_HALF, Objective.MIN)
    slow_time = time.perf_counter() - start

    assert fast.value == pytest.approx(slow.value, abs=1e-12)
    assert slow_time >= 5 * fast_time
