import pytest
from hypothesis import given, settings, strategies as st

from markov.bounds.verdict import lemma_checks
from markov.chain.core import build_chain
from markov.chain.generators import random_reversible
from markov.errors import DomainError, StateSpaceTooLarge
from markov.isoperimetry.constants import k_inf
from markov.isoperimetry.cuts import Family
from markov.settings import BoundParams


def _failures(checks):
    return [(check.name, check.measured) for check in checks if not check.passed]


def test_fixture_lemmas(four_cycle, lazy_four_cycle, swap_chain, six_cycle, path_eight):
    for chain in (four_cycle, lazy_four_cycle, swap_chain, six_cycle, path_eight):
        assert _failures(lemma_checks(chain)) == []


def test_check_names(lazy_four_cycle):
    names = [check.name for check in lemma_checks(lazy_four_cycle, steps=(2, 3))]
    assert names == [
        "complement-symmetry",
        "k-range",
        "k2-at-most-2k",
        "k3-at-most-3k",
        "k2-ceiling",
        "half-mass-at-k-two",
        "k-zero-implies-k2-zero",
        "k2-zero-implies-k4-zero",
        "k-zero-implies-k3-zero",
        "k2-zero-implies-k6-zero",
    ]


def test_lemmas_on_corpus(corpus):
    for chain in corpus:
        if chain.n_states <= 8:
            assert _failures(lemma_checks(chain)) == []


def test_zero_tests_agree_on_corpus(corpus):
    for chain in corpus:
        k_zero = k_inf(chain, 1, Family.CLOSED_HALF).value <= 1e-10
        for n in (2, 3, 4):
            assert k_zero == (k_inf(chain, n, Family.CLOSED_HALF).value <= 1e-10)


def test_size_limit():
    chain = build_chain(random_reversible(13, seed=0))
    with pytest.raises(StateSpaceTooLarge):
        lemma_checks(chain)
    assert _failures(lemma_checks(chain, params=BoundParams(lemma_max_states=13))) == []


def test_rejects_bad_steps(four_cycle):
    with pytest.raises(DomainError):
        lemma_checks(four_cycle, steps=(0,))


@settings(max_examples=40, deadline=None)
@given(
    size=st.integers(min_value=2, max_value=8),
    seed=st.integers(min_value=0, max_value=2 ** 32 - 1),
    density=st.sampled_from([0.3, 0.6, 1.0]),
)
def test_lemmas_on_random_chains(size, seed, density):
    chain = build_chain(random_reversible(size, seed=seed, density=density))
    assert _failures(lemma_checks(chain)) == []
