"""
One-sided bounds on k_n and K for chains too large to enumerate.

Every evaluated set gives an upper bound on an infimum and a lower bound on a
supremum; nothing stronger is claimed.
"""

import logging
from typing import List, Optional

import numpy as np

from markov.chain.core import MarkovChain
from markov.isoperimetry.cuts import (
	CutReport,
	Family,
	Mode,
	Objective,
	StateSubset,
	k_of_set,
	make_report,
	pair_admits,
)
from markov.settings import EigenSettings, EnumerationSettings
from markov.spectral.spectrum import right_eigenvectors, spectrum

logger = logging.getLogger(__name__)


def _better(value: float, best: Optional[float], objective: Objective) -> bool:
	if best is None:
		return True
	return value < best if objective is Objective.MIN else value > best


def _mask_of(states) -> int:
	mask = 0
	for state in states:
		mask |= 1 << int(state)
	return mask


def _prefix_masks(order: np.ndarray) -> List[int]:
	masks = []
	mask = 0
	for state in order[:-1]:
		mask |= 1 << int(state)
		masks.append(mask)
	return masks


def sweep_cut_bound(
		chain: MarkovChain,
		n: int = 1,
		family: Family = Family.CLOSED_HALF,
		objective: Objective = Objective.MIN,
		settings: Optional[EnumerationSettings] = None,
		eigen_settings: Optional[EigenSettings] = None,
) -> CutReport:
	"""
	Best prefix cut along eigenvector orderings of the symmetrized kernel.

	States are sorted by the eigenvector of the second-largest eigenvalue; for
	``objective=max`` the ordering by the eigenvector of the smallest eigenvalue,
	which separates the two halves of a near-bipartite chain, is scanned too.
	"""
	settings = settings or EnumerationSettings()
	report = spectrum(chain, eigen_settings, with_vectors=True)
	vectors = right_eigenvectors(chain, report)

	orderings = [np.argsort(vectors[:, 1], kind="stable")]
	if objective is Objective.MAX:
		orderings.append(np.argsort(vectors[:, -1], kind="stable"))
		family = Family.ALL_PROPER

	best_value: Optional[float] = None
	best_subset: Optional[StateSubset] = None
	for order in orderings:
		for mask in _prefix_masks(order):
			subset = StateSubset.from_mask(chain, mask)
			if not pair_admits(family, subset.mass, settings.half_tol):
				continue
			value = k_of_set(chain, subset, n)
			if _better(value, best_value, objective):
				best_value, best_subset = value, subset

	if best_subset is None:
		# every prefix cut has mass exactly 1/2; fall back to the first one
		best_subset = StateSubset.from_mask(chain, _prefix_masks(orderings[0])[0])
		family = Family.CLOSED_HALF
		logger.warning("No sweep cut lies in the strict-half family; reporting a closed-half cut")

	return make_report(chain, best_subset, n, Mode.SWEEP, family, objective, settings.half_tol)


def _flip_values(
		flow: np.ndarray,
		weights: np.ndarray,
		inside: np.ndarray,
		family: Family,
		objective: Objective,
		half_tol: float,
) -> np.ndarray:
	"""k_n of every set reachable from ``inside`` by flipping a single state."""
	n_states = inside.size
	candidates = np.tile(inside.astype(float), (n_states, 1))
	np.fill_diagonal(candidates, 1.0 - inside.astype(float))
	mass = candidates @ weights
	out_flow = np.sum((candidates @ flow) * (1.0 - candidates), axis=1)
	with np.errstate(divide="ignore", invalid="ignore"):
		values = out_flow / (mass * (1.0 - mass))

	sizes = candidates.sum(axis=1)
	invalid = (sizes == 0) | (sizes == n_states)
	if family is Family.STRICT_HALF:
		invalid |= np.abs(mass - 0.5) <= half_tol
	return np.where(invalid, np.inf if objective is Objective.MIN else -np.inf, values)


def local_search_bound(
		chain: MarkovChain,
		n: int = 1,
		objective: Objective = Objective.MIN,
		seed: int = 0,
		restarts: int = 8,
		family: Family = Family.CLOSED_HALF,
		settings: Optional[EnumerationSettings] = None,
) -> CutReport:
	"""
	Single-state-flip hill climbing from seeded random subsets.

	Each restart draws from its own child of ``SeedSequence(seed)``, so the result
	depends only on (seed, restarts).
	"""
	settings = settings or EnumerationSettings()
	if objective is Objective.MAX:
		family = Family.ALL_PROPER
	flow = np.asarray(chain.flow_matrix(n))
	weights = chain.weights
	n_states = chain.n_states
	worst = np.inf if objective is Objective.MIN else -np.inf

	best_value: Optional[float] = None
	best_mask: Optional[int] = None
	for restart, child in enumerate(np.random.SeedSequence(seed).spawn(restarts)):
		rng = np.random.default_rng(child)
		inside = rng.random(n_states) < 0.5
		if inside.all() or not inside.any():
			inside[rng.integers(n_states)] ^= True

		subset = StateSubset.from_mask(chain, _mask_of(np.flatnonzero(inside)))
		current = k_of_set(chain, subset, n) if pair_admits(family, subset.mass, settings.half_tol) else worst
		moves = 0
		while moves < n_states * n_states:
			values = _flip_values(flow, weights, inside, family, objective, settings.half_tol)
			index = int(np.argmin(values) if objective is Objective.MIN else np.argmax(values))
			if not np.isfinite(values[index]) or not _better(values[index], current, objective):
				break
			inside[index] ^= True
			current = float(values[index])
			moves += 1

		logger.debug("Local search restart %d settled after %d moves at %.6g", restart, moves, current)
		if np.isfinite(current) and _better(current, best_value, objective):
			best_value, best_mask = current, _mask_of(np.flatnonzero(inside))

	if best_mask is None:
		logger.warning("Local search found no strict-half set; reporting a closed-half set")
		return local_search_bound(chain, n, objective, seed, restarts, Family.CLOSED_HALF, settings)

	subset = StateSubset.from_mask(chain, best_mask)
	return make_report(chain, subset, n, Mode.LOCAL_SEARCH, family, objective, settings.half_tol)
