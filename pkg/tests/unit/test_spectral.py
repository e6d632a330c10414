import numpy as np
import pytest

from markov.chain.core import build_chain
from markov.chain.generators import complete, path
from markov.errors import DimensionMismatch, DomainError, NoConvergence, NotMeanZero, NotReversible
from markov.settings import EigenSettings
from markov.spectral.jacobi import jacobi_eigh, off_diagonal_norm
from markov.spectral.spectrum import (
    TestFunction,
    decay_rate,
    normalize_test_function,
    right_eigenvectors,
    spectrum,
    spectrum_of_square,
    symmetrize,
)


def _symmetric(seed, size):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(size, size))
    return a + a.T


@pytest.mark.parametrize("seed,size", [(0, 2), (1, 5), (2, 9), (3, 16)])
def test_jacobi_matches_dense_eigensolver(seed, size):
    matrix = _symmetric(seed, size)
    decomposition = jacobi_eigh(matrix)
    np.testing.assert_allclose(decomposition.values, np.linalg.eigvalsh(matrix)[::-1], atol=1e-10)
    vectors = decomposition.vectors
    np.testing.assert_allclose(vectors.T @ vectors, np.eye(size), atol=1e-10)
    np.testing.assert_allclose(matrix @ vectors, vectors * decomposition.values, atol=1e-9)


def test_jacobi_leaves_its_input_alone():
    matrix = _symmetric(4, 6)
    before = matrix.copy()
    jacobi_eigh(matrix)
    np.testing.assert_array_equal(matrix, before)


def test_jacobi_on_a_diagonal_matrix_needs_no_sweeps():
    decomposition = jacobi_eigh(np.diag([1.0, 3.0, 2.0]))
    assert decomposition.sweeps == 0
    np.testing.assert_array_equal(decomposition.values, [3.0, 2.0, 1.0])


def test_jacobi_sweep_limit():
    with pytest.raises(NoConvergence):
        jacobi_eigh(_symmetric(5, 8), EigenSettings(max_sweeps=1))


def test_jacobi_rejects_non_square():
    with pytest.raises(DimensionMismatch):
        jacobi_eigh(np.ones((2, 3)))


def test_off_diagonal_norm():
    assert off_diagonal_norm(np.array([[5.0, 3.0], [4.0, 1.0]])) == pytest.approx(5.0)


def test_lazy_four_cycle_spectrum(lazy_four_cycle):
    report = spectrum(lazy_four_cycle)
    np.testing.assert_allclose(report.eigenvalues, [1.0, 0.5, 0.5, 0.0], atol=1e-12)
    assert report.gap_at_one == pytest.approx(0.5, abs=1e-12)
    assert report.gap_at_minus_one == pytest.approx(1.0, abs=1e-12)
    assert report.spectral_gap == pytest.approx(0.5, abs=1e-12)
    assert report.extreme_modulus == pytest.approx(0.5, abs=1e-12)
    assert report.has_gap()


def test_four_cycle_has_no_spectral_gap(four_cycle):
    report = spectrum(four_cycle)
    np.testing.assert_allclose(report.eigenvalues, [1.0, 0.0, 0.0, -1.0], atol=1e-12)
    assert report.eigenvalues[-1] == pytest.approx(-1.0, abs=1e-9)
    assert report.spectral_gap == pytest.approx(0.0, abs=1e-9)
    assert not report.has_gap()


def test_swap_chain_spectrum(swap_chain):
    np.testing.assert_allclose(spectrum(swap_chain).eigenvalues, [1.0, -1.0], atol=1e-12)


def test_spectrum_matches_dense_eigensolver(corpus):
    for chain in corpus:
        root = np.sqrt(np.asarray(chain.weights))
        oracle = np.linalg.eigvalsh(root[:, None] * np.asarray(chain.p) / root[None, :])[::-1]
        report = spectrum(chain)
        np.testing.assert_allclose(report.eigenvalues, oracle, atol=1e-10)
        assert report.eigenvalues[0] == pytest.approx(1.0, abs=1e-10)


def test_two_step_spectrum_is_the_square(corpus):
    for chain in corpus:
        squares = np.sort(spectrum(chain).eigenvalues ** 2)
        np.testing.assert_allclose(np.sort(spectrum_of_square(chain).eigenvalues), squares, atol=1e-8)


def test_symmetrize_requires_reversibility(directed_cycle):
    with pytest.raises(NotReversible):
        symmetrize(directed_cycle)
    with pytest.raises(NotReversible):
        spectrum(directed_cycle)


def test_right_eigenvectors(path_eight):
    report = spectrum(path_eight, with_vectors=True)
    vectors = right_eigenvectors(path_eight, report)
    np.testing.assert_allclose(np.asarray(path_eight.p) @ vectors, vectors * report.eigenvalues, atol=1e-10)
    assert np.max(report.residuals) < 1e-10
    with pytest.raises(DomainError):
        right_eigenvectors(path_eight, spectrum(path_eight))


def test_test_function_validation(four_cycle):
    TestFunction.of(four_cycle, [1.0, -1.0, 1.0, -1.0])
    with pytest.raises(NotMeanZero):
        TestFunction.of(four_cycle, [1.0, 1.0, 1.0, 1.0])
    with pytest.raises(NotMeanZero):
        TestFunction.of(four_cycle, [2.0, -2.0, 2.0, -2.0])
    with pytest.raises(DimensionMismatch):
        TestFunction.of(four_cycle, [1.0, -1.0])


def test_normalize_test_function(path_eight):
    f = normalize_test_function(path_eight, np.arange(8.0))
    weights = np.asarray(path_eight.weights)
    assert weights @ f.values == pytest.approx(0.0, abs=1e-12)
    assert weights @ f.values ** 2 == pytest.approx(1.0)
    with pytest.raises(NotMeanZero):
        normalize_test_function(path_eight, np.ones(8))


def test_decay_rate_of_an_eigenfunction(lazy_four_cycle):
    f = np.sqrt(2.0) * np.array([1.0, 0.0, -1.0, 0.0])
    assert decay_rate(lazy_four_cycle, f, 10) == pytest.approx(0.5, abs=1e-12)


def test_decay_rate_without_a_gap(four_cycle):
    assert decay_rate(four_cycle, [1.0, -1.0, 1.0, -1.0], 50) == pytest.approx(1.0)
    with pytest.raises(DomainError):
        decay_rate(four_cycle, [1.0, -1.0, 1.0, -1.0], 1)


def test_decay_rate_approaches_the_extreme_modulus(corpus):
    for chain in corpus[:20]:
        report = spectrum(chain)
        rng = np.random.default_rng(chain.n_states)
        f = normalize_test_function(chain, rng.normal(size=chain.n_states))
        assert decay_rate(chain, f, 64) <= report.extreme_modulus + 1e-9


def test_decay_rate_stays_below_the_modulus_on_a_fast_chain():
    chain = build_chain(complete(4))
    report = spectrum(chain)
    f = normalize_test_function(chain, [1.0, 2.0, 3.0, 7.0])
    assert decay_rate(chain, f, 40) <= report.extreme_modulus + 1e-9


def test_decay_rate_of_the_alternating_function_on_the_lazy_cycle(lazy_four_cycle):
    assert decay_rate(lazy_four_cycle, [1.0, -1.0, 1.0, -1.0], 10) == pytest.approx(0.0, abs=1e-12)


def test_three_state_path_symmetrization():
    chain = build_chain(path(3))
    symmetric = symmetrize(chain)
    assert symmetric[0][1] == pytest.approx(np.sqrt(0.5), abs=1e-12)
    np.testing.assert_allclose(symmetric, symmetric.T, atol=1e-12)
    np.testing.assert_allclose(spectrum(chain).eigenvalues, [1.0, 0.0, -1.0], atol=1e-10)


def test_has_gap_uses_the_configured_tolerance(lazy_four_cycle):
    assert spectrum(lazy_four_cycle).has_gap()
    report = spectrum(lazy_four_cycle, EigenSettings(gap_tol=0.6))
    assert not report.has_gap()
    assert report.has_gap(0.1)
