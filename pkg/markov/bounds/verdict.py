"""
Measured-versus-bound checks for a reversible chain.

``classify`` evaluates the three spectral-gap conditions (r > 0, 0 < k with K < 2,
k2 > 0) which must agree on every reversible chain. ``verify_report`` gathers every
measured constant, the intervals built from them and one ``ContainmentCheck`` per
claimed inequality. ``lemma_checks`` runs the per-set inequalities over all proper
subsets of a small chain.
"""

import logging
from dataclasses import dataclass
from typing import Iterable, List, Optional, Tuple

import numpy as np

from markov.bounds.formulas import Interval, lawler_sokal_interval, theorem2_interval
from markov.bounds.optimizer import K2Bound, k2_lower_bound
from markov.chain.core import MarkovChain
from markov.errors import DomainError, EmptyFamily, NotReversible, StateSpaceTooLarge
from markov.isoperimetry.constants import K_sup, k_inf
from markov.isoperimetry.cuts import CutReport, Family
from markov.settings import BoundParams, Settings
from markov.spectral.spectrum import SpectrumReport, spectrum, spectrum_of_square

logger = logging.getLogger(__name__)

CHECK_MARGIN = 1e-9
MAPPING_MARGIN = 1e-8
SET_MARGIN = 1e-12
ZERO_TOL = 1e-10
HALF_MASS_TOL = 1e-6


@dataclass(frozen=True)
class Theorem2Verdict:
	r: float
	k: float
	K: float
	k2: float
	has_gap: bool
	cond_kK: bool
	cond_k2: bool

	@property
	def consistent(self) -> bool:
		return self.has_gap == self.cond_kK == self.cond_k2


@dataclass(frozen=True)
class ContainmentCheck:
	"""``measured`` must lie in [lower - margin, upper + margin]; None is unbounded."""

	name: str
	measured: float
	lower: Optional[float]
	upper: Optional[float]
	margin: float
	passed: bool

	@classmethod
	def of(
			cls,
			name: str,
			measured: float,
			lower: Optional[float],
			upper: Optional[float],
			margin: float,
	) -> "ContainmentCheck":
		above = lower is None or measured >= lower - margin
		below = upper is None or measured <= upper + margin
		return cls(
			name=name,
			measured=float(measured),
			lower=None if lower is None else float(lower),
			upper=None if upper is None else float(upper),
			margin=margin,
			passed=bool(above and below),
		)


@dataclass(frozen=True, eq=False)
class BoundReport:
	# None when every proper subset pairs with one of mass exactly 1/2
	k_strict: Optional[CutReport]
	k: CutReport
	K: CutReport
	k2: CutReport
	spectrum: SpectrumReport
	lawler_sokal: Interval
	theorem2_interval: Interval
	k2_bound: K2Bound
	verdict: Theorem2Verdict
	checks: Tuple[ContainmentCheck, ...]

	@property
	def gap_k(self) -> float:
		"""The k entering the gap-at-1 bounds: strict-half when it exists, else closed-half."""
		return self.k_strict.value if self.k_strict is not None else self.k.value

	@property
	def passed(self) -> bool:
		return all(check.passed for check in self.checks)

	@property
	def failures(self) -> List[ContainmentCheck]:
		return [check for check in self.checks if not check.passed]


def _verdict(r: float, k: float, K: float, k2: float, gap_tol: float) -> Theorem2Verdict:
	return Theorem2Verdict(
		r=r,
		k=k,
		K=K,
		k2=k2,
		has_gap=r > gap_tol,
		cond_kK=k > gap_tol and K < 2.0 - gap_tol,
		cond_k2=k2 > gap_tol,
	)


def _require_reversible(chain: MarkovChain) -> None:
	if not chain.reversible:
		raise NotReversible(f"Spectral bounds need a reversible chain; asymmetry is {chain.asymmetry:.3g}")


def classify(
		chain: MarkovChain,
		params: Optional[BoundParams] = None,
		settings: Optional[Settings] = None,
) -> Theorem2Verdict:
	"""Evaluate the three gap conditions with closed-half k and k2 and exact K."""
	settings = settings or Settings()
	params = params or settings.bounds
	_require_reversible(chain)

	report = spectrum(chain, settings.eigen)
	k = k_inf(chain, 1, Family.CLOSED_HALF, settings.enumeration)
	K = K_sup(chain, settings.enumeration)
	k2 = k_inf(chain, 2, Family.CLOSED_HALF, settings.enumeration)
	return _verdict(report.spectral_gap, k.value, K.value, k2.value, params.gap_tol)


def _strict_k(chain: MarkovChain, settings: Settings) -> Optional[CutReport]:
	try:
		return k_inf(chain, 1, Family.STRICT_HALF, settings.enumeration)
	except EmptyFamily as e:
		logger.info("Strict-half family is empty (%s); gap bounds use the closed-half k", e)
		return None


def verify_report(
		chain: MarkovChain,
		params: Optional[BoundParams] = None,
		settings: Optional[Settings] = None,
) -> BoundReport:
	"""Measure every constant, build the intervals and check each claimed containment."""
	settings = settings or Settings()
	params = params or settings.bounds
	_require_reversible(chain)

	report = spectrum(chain, settings.eigen)
	square = spectrum_of_square(chain, settings.eigen)
	k_strict = _strict_k(chain, settings)
	k = k_inf(chain, 1, Family.CLOSED_HALF, settings.enumeration)
	K = K_sup(chain, settings.enumeration)
	k2 = k_inf(chain, 2, Family.CLOSED_HALF, settings.enumeration)
	gap_k = k_strict.value if k_strict is not None else k.value

	lawler_sokal = lawler_sokal_interval(gap_k, params)
	interval = theorem2_interval(gap_k, k2.value, params)
	bound = k2_lower_bound(k.value, K.value, params)
	verdict = _verdict(report.spectral_gap, k.value, K.value, k2.value, params.gap_tol)

	checks = [
		ContainmentCheck.of("gap-at-one-sandwich", report.gap_at_one, lawler_sokal.lower, lawler_sokal.upper, CHECK_MARGIN),
	]
	for index, value in enumerate(report.eigenvalues[1:], start=2):
		checks.append(ContainmentCheck.of(
			f"eigenvalue-{index}-interval", value, interval.lower, interval.upper, CHECK_MARGIN))
	checks.append(ContainmentCheck.of("k2-lower-bound", k2.value, bound.value, None, CHECK_MARGIN))

	squares = np.sort(report.eigenvalues ** 2)
	mapping_error = float(np.max(np.abs(squares - np.sort(square.eigenvalues))))
	checks.append(ContainmentCheck.of("two-step-spectrum", mapping_error, None, 0.0, MAPPING_MARGIN))
	checks.append(ContainmentCheck.of("gap-conditions-agree", float(verdict.consistent), 1.0, 1.0, 0.0))

	for check in checks:
		if not check.passed:
			logger.warning(
				"Check %s failed: %.17g not in [%s, %s] with margin %g",
				check.name, check.measured, check.lower, check.upper, check.margin)

	return BoundReport(
		k_strict=k_strict,
		k=k,
		K=K,
		k2=k2,
		spectrum=report,
		lawler_sokal=lawler_sokal,
		theorem2_interval=interval,
		k2_bound=bound,
		verdict=verdict,
		checks=tuple(checks),
	)


def _subset_bits(n_states: int) -> Tuple[np.ndarray, np.ndarray]:
	masks = np.arange(1, (1 << n_states) - 1, dtype=np.int64)
	bits = ((masks[:, None] >> np.arange(n_states)) & 1).astype(float)
	return masks, bits


def _set_values(chain: MarkovChain, bits: np.ndarray, n: int) -> np.ndarray:
	"""k_n(A) for every row of ``bits``."""
	flow = np.asarray(chain.flow_matrix(n))
	out = np.sum((bits @ flow) * (1.0 - bits), axis=1)
	return out / ((bits @ chain.weights) * ((1.0 - bits) @ chain.weights))


def _worst(values: np.ndarray) -> float:
	return float(np.max(values)) if values.size else 0.0


def lemma_checks(
		chain: MarkovChain,
		steps: Iterable[int] = (2, 3, 4),
		params: Optional[BoundParams] = None,
) -> Tuple[ContainmentCheck, ...]:
	"""
	Per-set inequalities over every proper subset, vectorized over all bitmasks.

	Each check reports the worst excess of a left side over its right side, which
	must not exceed 0:
	  * k(A) = k(A^c)
	  * 0 <= k(A) <= 2
	  * k_n(A) <= n k(A)
	  * k_2(A) <= 1 / (pi(A) pi(A^c)) - 2 k(A)
	  * k(A) close to 2 forces pi(A) close to 1/2
	and the constant-level zero tests: k = 0 implies k_n = 0, k_2 = 0 implies k_2n = 0.
	The converse of the first fails on periodic chains (the 4-cycle has k = 1, k_2 = 0).
	"""
	params = params or BoundParams()
	steps = tuple(steps)
	for n in steps:
		if int(n) != n or n < 1:
			raise DomainError(f"Step counts must be positive integers, got {n}")
	if chain.n_states > params.lemma_max_states:
		raise StateSpaceTooLarge(
			f"Per-set checks cover 2^{chain.n_states} subsets; the limit is {params.lemma_max_states} states")

	full = (1 << chain.n_states) - 1
	masks, bits = _subset_bits(chain.n_states)
	mass = bits @ chain.weights
	values = {n: _set_values(chain, bits, n) for n in {1, 2, *steps, *(2 * n for n in steps)}}
	k_sets = values[1]

	checks = [
		ContainmentCheck.of(
			"complement-symmetry", _worst(np.abs(k_sets - k_sets[(full ^ masks) - 1])), None, 0.0, SET_MARGIN),
		ContainmentCheck.of(
			"k-range", _worst(np.maximum(-k_sets, k_sets - 2.0)), None, 0.0, SET_MARGIN),
	]
	for n in steps:
		checks.append(ContainmentCheck.of(
			f"k{n}-at-most-{n}k", _worst(values[n] - n * k_sets), None, 0.0, SET_MARGIN))

	ceiling = 1.0 / (mass * (1.0 - mass)) - 2.0 * k_sets
	checks.append(ContainmentCheck.of("k2-ceiling", _worst(values[2] - ceiling), None, 0.0, SET_MARGIN))

	near_two = k_sets >= 2.0 - CHECK_MARGIN
	checks.append(ContainmentCheck.of(
		"half-mass-at-k-two", _worst(np.abs(mass[near_two] - 0.5)), None, HALF_MASS_TOL, 0.0))

	# min over all proper sets equals the closed-half infimum since k(A) = k(A^c)
	k_zero = float(np.min(k_sets)) <= ZERO_TOL
	k2_zero = float(np.min(values[2])) <= ZERO_TOL
	for n in steps:
		follows = not k_zero or float(np.min(values[n])) <= ZERO_TOL
		checks.append(ContainmentCheck.of(f"k-zero-implies-k{n}-zero", float(not follows), None, 0.0, 0.0))
		propagates = not k2_zero or float(np.min(values[2 * n])) <= ZERO_TOL
		checks.append(ContainmentCheck.of(f"k2-zero-implies-k{2 * n}-zero", float(not propagates), None, 0.0, 0.0))

	for check in checks:
		if not check.passed:
			logger.warning("Per-set check %s failed: worst excess %.3g", check.name, check.measured)
	return tuple(checks)
