"""
L2(pi)-spectrum of reversible chains.

For a reversible chain, S = D^(1/2) P D^(-1/2) with D = diag(pi) is symmetric and
similar to P, so the eigenvalues of P are those of S.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from markov.chain.core import MarkovChain
from markov.errors import DimensionMismatch, DomainError, NotMeanZero, NotReversible
from markov.settings import EigenSettings
from markov.spectral.jacobi import jacobi_eigh

logger = logging.getLogger(__name__)

TEST_FUNCTION_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class SpectrumReport:
	eigenvalues: np.ndarray
	gap_at_one: float
	gap_at_minus_one: float
	spectral_gap: float
	sweeps: int
	# columns are orthonormal eigenvectors of the symmetrized matrix
	eigenvectors: Optional[np.ndarray] = None
	residuals: Optional[np.ndarray] = None
	gap_tol: float = 1e-9

	@property
	def extreme_modulus(self) -> float:
		"""max(|lambda_2|, |lambda_n|), the geometric decay rate on mean-zero functions."""
		return max(abs(self.eigenvalues[1]), abs(self.eigenvalues[-1]))

	def has_gap(self, gap_tol: Optional[float] = None) -> bool:
		return self.spectral_gap > (self.gap_tol if gap_tol is None else gap_tol)


@dataclass(frozen=True, eq=False)
class TestFunction:
	"""A function in L2_{0,1}(pi): mean zero and unit norm."""

	__test__ = False

	values: np.ndarray

	@classmethod
	def of(cls, chain: MarkovChain, values: Sequence[float], tol: float = TEST_FUNCTION_TOL) -> "TestFunction":
		f = np.asarray(values, dtype=float)
		if f.shape != (chain.n_states,):
			raise DimensionMismatch(f"Function has {f.size} entries, chain has {chain.n_states} states")
		mean = float(chain.weights @ f)
		second_moment = float(chain.weights @ f ** 2)
		if abs(mean) > tol:
			raise NotMeanZero(f"Function has pi-mean {mean:.3g}")
		if abs(second_moment - 1.0) > tol:
			raise NotMeanZero(f"Function has pi-norm^2 {second_moment:.17g}, expected 1")
		return cls(values=f)


def l2_norm(chain: MarkovChain, f: np.ndarray) -> float:
	return float(np.sqrt(chain.weights @ f ** 2))


def normalize_test_function(chain: MarkovChain, values: Sequence[float]) -> TestFunction:
	"""Center by the pi-mean and scale to unit pi-norm."""
	f = np.asarray(values, dtype=float)
	centered = f - chain.weights @ f
	norm = l2_norm(chain, centered)
	if norm == 0:
		raise NotMeanZero("A constant function has no mean-zero normalization")
	return TestFunction.of(chain, centered / norm)


def symmetrize(chain: MarkovChain) -> np.ndarray:
	"""S[i][j] = sqrt(pi_i / pi_j) p[i][j]."""
	if not chain.reversible:
		raise NotReversible(f"Chain violates detailed balance by {chain.asymmetry:.3g}")
	root = np.sqrt(chain.weights)
	return root[:, None] * chain.p / root[None, :]


def _report(matrix: np.ndarray, settings: EigenSettings, with_vectors: bool) -> SpectrumReport:
	decomposition = jacobi_eigh(matrix, settings)
	values = decomposition.values
	gap_at_one = 1.0 - values[1]
	gap_at_minus_one = values[-1] + 1.0

	residuals = None
	if with_vectors:
		symmetric = 0.5 * (matrix + matrix.T)
		residuals = np.max(np.abs(symmetric @ decomposition.vectors - decomposition.vectors * values), axis=0)

	return SpectrumReport(
		eigenvalues=values,
		gap_at_one=float(gap_at_one),
		gap_at_minus_one=float(gap_at_minus_one),
		spectral_gap=float(min(gap_at_one, gap_at_minus_one)),
		sweeps=decomposition.sweeps,
		eigenvectors=decomposition.vectors if with_vectors else None,
		residuals=residuals,
		gap_tol=settings.gap_tol,
	)


def spectrum(
		chain: MarkovChain,
		settings: Optional[EigenSettings] = None,
		with_vectors: bool = False,
) -> SpectrumReport:
	"""Eigenvalues of P in descending order together with the gaps at 1 and -1."""
	report = _report(symmetrize(chain), settings or EigenSettings(), with_vectors)
	if abs(report.eigenvalues[0] - 1.0) > 1e-9:
		logger.warning("Top eigenvalue %.17g differs from 1", report.eigenvalues[0])
	return report


def spectrum_of_square(
		chain: MarkovChain,
		settings: Optional[EigenSettings] = None,
		with_vectors: bool = False,
) -> SpectrumReport:
	"""Spectrum of the two-step chain; its symmetrization is S @ S."""
	symmetric = symmetrize(chain)
	return _report(symmetric @ symmetric, settings or EigenSettings(), with_vectors)


def right_eigenvectors(chain: MarkovChain, report: SpectrumReport) -> np.ndarray:
	"""Eigenvectors of P itself, phi = D^(-1/2) v, normalized in L2(pi)."""
	if report.eigenvectors is None:
		raise DomainError("Spectrum was computed without eigenvectors")
	return report.eigenvectors / np.sqrt(chain.weights)[:, None]


def decay_rate(chain: MarkovChain, f: Union[TestFunction, Sequence[float]], n_max: int) -> float:
	"""||P^n f||_2^(1/n) at n = n_max, with ||g||_2^2 = sum_i pi_i g_i^2."""
	if not isinstance(f, TestFunction):
		f = TestFunction.of(chain, f)
	if int(n_max) != n_max or n_max < 2:
		raise DomainError(f"n_max must be an integer >= 2, got {n_max}")

	g = f.values
	for _ in range(n_max):
		g = chain.p @ g
		# rounding leaks into the constant eigenvector, which never decays
		g = g - chain.weights @ g
	return l2_norm(chain, g) ** (1.0 / n_max)
