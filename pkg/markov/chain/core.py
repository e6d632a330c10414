"""
Finite-state Markov chains: validation, stationary distribution, reversibility,
n-step kernels and the lazy transform.

A ``MarkovChain`` is immutable once built; every operation here is a pure
function of its inputs.
"""

import logging
import threading
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Union

import numpy as np

from markov.errors import (
	DimensionMismatch,
	DomainError,
	NotIrreducible,
	NotStochastic,
	SingularSystem,
	ValidationError,
	ZeroMassState,
)
from markov.settings import ChainSettings

logger = logging.getLogger(__name__)

MAX_STEPS = 2 ** 31

MatrixLike = Union[np.ndarray, Sequence[Sequence[float]]]


def _frozen(array: np.ndarray) -> np.ndarray:
	array.setflags(write=False)
	return array


@dataclass(frozen=True, eq=False)
class TransitionKernel:
	p: np.ndarray
	row_residual: float

	@property
	def n(self) -> int:
		return self.p.shape[0]


@dataclass(frozen=True, eq=False)
class StationaryDistribution:
	values: np.ndarray
	# max |pi P - pi|
	residual: float


@dataclass(frozen=True, eq=False)
class NStepKernel:
	n_steps: int
	p_n: np.ndarray
	row_residual: float


@dataclass(frozen=True, eq=False)
class MarkovChain:
	kernel: TransitionKernel
	pi: StationaryDistribution
	flow: np.ndarray
	reversible: bool
	# max |Q[i][j] - Q[j][i]|
	asymmetry: float
	settings: ChainSettings = field(default_factory=ChainSettings)
	_powers: Dict[int, np.ndarray] = field(default_factory=dict, repr=False)
	_lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

	@property
	def n_states(self) -> int:
		return self.kernel.n

	@property
	def p(self) -> np.ndarray:
		return self.kernel.p

	@property
	def weights(self) -> np.ndarray:
		"""The stationary vector as a plain array."""
		return self.pi.values

	def power(self, n: int) -> np.ndarray:
		"""p^n, memoized per chain."""
		_check_steps(n)
		with self._lock:
			cached = self._powers.get(n)
		if cached is not None:
			return cached
		p_n = self.p if n == 1 else _frozen(np.linalg.matrix_power(self.p, n))
		with self._lock:
			self._powers.setdefault(n, p_n)
		return p_n

	def flow_matrix(self, n: int = 1) -> np.ndarray:
		"""Ergodic flow of the n-step chain, Q[i][j] = pi_i p^n(i, j)."""
		if n == 1:
			return self.flow
		return self.weights[:, None] * self.power(n)


def _check_steps(n: int) -> None:
	if int(n) != n or n < 1:
		raise DomainError(f"Step count must be a positive integer, got {n}")
	if n > MAX_STEPS:
		raise DomainError(f"Step count {n} exceeds the supported maximum 2**31")


def _as_kernel(matrix: MatrixLike, settings: ChainSettings) -> TransitionKernel:
	try:
		p = np.array(matrix, dtype=float)
	except (TypeError, ValueError) as e:
		raise NotStochastic(f"Transition matrix is not numeric: {e}") from e

	if p.ndim != 2 or p.shape[0] != p.shape[1]:
		raise DimensionMismatch(f"Transition matrix must be square, got shape {p.shape}")
	if p.shape[0] < 2:
		raise DimensionMismatch("A chain needs at least two states")
	if not np.all(np.isfinite(p)):
		raise NotStochastic("Transition matrix contains non-finite entries")
	if np.any(p < 0):
		i, j = np.argwhere(p < 0)[0]
		raise NotStochastic(f"Negative transition probability p[{i}][{j}] = {p[i, j]}")

	row_residual = float(np.max(np.abs(p.sum(axis=1) - 1.0)))
	if row_residual > settings.row_tol:
		bad = int(np.argmax(np.abs(p.sum(axis=1) - 1.0)))
		raise NotStochastic(
			f"Row {bad} sums to {p[bad].sum():.17g}, off by more than row_tol={settings.row_tol}")
	return TransitionKernel(p=_frozen(p), row_residual=row_residual)


def _reachability(p: np.ndarray) -> np.ndarray:
	n = p.shape[0]
	reach = (p > 0) | np.eye(n, dtype=bool)
	# transitive closure by repeated squaring of the support graph
	for _ in range(max(1, int(np.ceil(np.log2(n))))):
		reach = (reach.astype(np.int64) @ reach.astype(np.int64)) > 0
	return reach


def _check_irreducible(kernel: TransitionKernel) -> None:
	reach = _reachability(kernel.p)
	if np.all(reach):
		return

	# i is recurrent iff everything reachable from i leads back to i
	recurrent = [i for i in range(kernel.n) if np.all(reach[:, i][reach[i]])]
	classes = {tuple(np.flatnonzero(reach[i])) for i in recurrent}
	if len(classes) > 1:
		raise NotIrreducible(f"Chain has {len(classes)} recurrent classes")
	transient = sorted(set(range(kernel.n)) - set(recurrent))
	raise ZeroMassState(f"Transient states {transient} carry zero stationary mass")


def stationary_distribution(
		kernel: TransitionKernel,
		settings: Optional[ChainSettings] = None,
) -> StationaryDistribution:
	"""Solve (P^T - I) pi = 0 with the last equation replaced by sum(pi) = 1."""
	settings = settings or ChainSettings()
	n = kernel.n
	system = kernel.p.T - np.eye(n)
	system[-1, :] = 1.0
	rhs = np.zeros(n)
	rhs[-1] = 1.0

	try:
		pi = np.linalg.solve(system, rhs)
	except np.linalg.LinAlgError as e:
		raise SingularSystem(f"Stationary distribution is not unique: {e}") from e

	if not np.all(np.isfinite(pi)):
		raise SingularSystem("Stationary solve produced non-finite masses")
	pi = pi / pi.sum()
	residual = float(np.max(np.abs(pi @ kernel.p - pi)))
	# rows off by row_residual shift pi P by up to that much
	allowed = settings.stat_tol + kernel.row_residual
	if residual > allowed:
		raise ValidationError(
			f"Stationary solve residual {residual:.3g} exceeds stat_tol={settings.stat_tol} "
			f"plus row residual {kernel.row_residual:.3g}")
	if np.any(pi <= 0):
		raise ZeroMassState(f"State {int(np.argmin(pi))} has stationary mass {pi.min():.3g}")
	return StationaryDistribution(values=_frozen(pi), residual=residual)


def _assemble(
		kernel: TransitionKernel,
		pi: StationaryDistribution,
		settings: ChainSettings,
) -> MarkovChain:
	flow = pi.values[:, None] * kernel.p
	asymmetry = float(np.max(np.abs(flow - flow.T)))
	chain = MarkovChain(
		kernel=kernel,
		pi=pi,
		flow=_frozen(flow),
		reversible=asymmetry <= settings.rev_tol,
		asymmetry=asymmetry,
		settings=settings,
	)
	logger.debug(
		"Built chain: %d states, reversible=%s, asymmetry=%.3g, stationary residual=%.3g",
		kernel.n, chain.reversible, asymmetry, pi.residual)
	return chain


def build_chain(
		matrix: MatrixLike,
		settings: Optional[ChainSettings] = None,
		pi: Optional[Sequence[float]] = None,
) -> MarkovChain:
	"""
	Validate a transition matrix and build the chain.

	:param matrix: n x n row-stochastic matrix, n >= 2.
	:param settings: tolerances; defaults when omitted.
	:param pi: optional expected stationary distribution, checked against the solved one.
	"""
	settings = settings or ChainSettings()
	kernel = _as_kernel(matrix, settings)
	_check_irreducible(kernel)
	stationary = stationary_distribution(kernel, settings)

	if pi is not None:
		expected = np.asarray(pi, dtype=float)
		if expected.shape != (kernel.n,):
			raise DimensionMismatch(f"pi has {expected.size} entries, chain has {kernel.n} states")
		if abs(float(expected.sum()) - 1.0) > settings.sum_tol:
			raise ValidationError(f"Given pi sums to {expected.sum():.17g}, not 1 (sum_tol={settings.sum_tol})")
		mismatch = float(np.max(np.abs(expected - stationary.values)))
		if mismatch > settings.stat_tol:
			raise ValidationError(
				f"Given pi differs from the stationary distribution by {mismatch:.3g} (stat_tol={settings.stat_tol})")

	return _assemble(kernel, stationary, settings)


def n_step_kernel(chain: MarkovChain, n: int) -> NStepKernel:
	"""p^n by repeated squaring; n=1 returns the chain's own kernel matrix."""
	p_n = chain.power(n)
	row_residual = float(np.max(np.abs(p_n.sum(axis=1) - 1.0)))
	if row_residual > n * chain.settings.row_tol + 1e-15:
		logger.warning("%d-step kernel rows drift from 1 by %.3g", n, row_residual)
	return NStepKernel(n_steps=n, p_n=p_n, row_residual=row_residual)


def lazify(chain: MarkovChain, hold: float) -> MarkovChain:
	"""hold * I + (1 - hold) * p, sharing the stationary distribution of ``chain``."""
	if not 0 <= hold < 1:
		raise DomainError(f"hold must lie in [0, 1), got {hold}")
	if hold == 0:
		return chain
	p = hold * np.eye(chain.n_states) + (1.0 - hold) * chain.p
	row_residual = float(np.max(np.abs(p.sum(axis=1) - 1.0)))
	kernel = TransitionKernel(p=_frozen(p), row_residual=row_residual)
	return _assemble(kernel, chain.pi, chain.settings)


def apply_kernel(chain: MarkovChain, f: Sequence[float]) -> np.ndarray:
	"""(Pf)(x) = sum_y p(x, y) f(y)."""
	values = np.asarray(f, dtype=float)
	if values.shape != (chain.n_states,):
		raise DimensionMismatch(f"Function has {values.size} entries, chain has {chain.n_states} states")
	return chain.p @ values


def detailed_balance_residual(chain: MarkovChain, n: int = 1) -> float:
	"""max |pi_i p^n(i, j) - pi_j p^n(j, i)|."""
	flow = chain.flow_matrix(n)
	return float(np.max(np.abs(flow - flow.T)))
