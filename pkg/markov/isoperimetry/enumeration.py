"""
Exact extremal isoperimetric constants by Gray-code subset enumeration.

States are split in two groups. The first ``block_bits`` states form a block
whose 2**block_bits subsets are tabulated as numpy vectors; the remaining states
are walked in Gray-code order, so each step flips one state in or out and updates
the cut quantities of a whole block of subsets with a single vector add.

For a subset A the internal mass G(A) = sum_{x, y in A} Q[x][y] is tracked and the
flow out is F(A) = pi(A) - G(A), since the rows of Q sum to pi. Only subsets that
contain state 0 are visited; F(A) = F(A^c) for every stationary chain, so this
covers each pair {A, A^c} once.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from markov.chain.core import MarkovChain
from markov.errors import EmptyFamily, StateSpaceTooLarge
from markov.isoperimetry.cuts import (
	CutReport,
	Family,
	Mode,
	Objective,
	StateSubset,
	make_report,
)
from markov.settings import EnumerationSettings

logger = logging.getLogger(__name__)


def subset_sums(values: np.ndarray) -> np.ndarray:
	"""out[mask] = sum of values[i] over the bits i set in mask."""
	sums = np.zeros(1)
	for value in values:
		sums = np.concatenate([sums, sums + value])
	return sums


def internal_sums(flow: np.ndarray) -> np.ndarray:
	"""out[mask] = sum of flow[x][y] over x, y both in mask."""
	sums = np.zeros(1)
	for s in range(flow.shape[0]):
		cross = subset_sums(flow[:s, s] + flow[s, :s])
		sums = np.concatenate([sums, sums + flow[s, s] + cross])
	return sums


def gray_flips(n_bits: int):
	"""Bit flipped at each step 1 .. 2**n_bits - 1 of the reflected Gray code."""
	for step in range(1, 1 << n_bits):
		yield (step & -step).bit_length() - 1


@dataclass(frozen=True)
class _Candidate:
	value: float
	mask: int

	def beats(self, other: Optional["_Candidate"], objective: Objective) -> bool:
		if other is None:
			return True
		if objective is Objective.MIN:
			return self.value < other.value
		return self.value > other.value


class CutEnumerator:
	"""Exact scan of one chain's n-step flow over all subset pairs."""

	def __init__(self, chain: MarkovChain, n: int = 1, settings: Optional[EnumerationSettings] = None):
		self.settings = settings or EnumerationSettings()
		if chain.n_states > self.settings.exact_max_states:
			raise StateSpaceTooLarge(
				f"Exact enumeration is limited to {self.settings.exact_max_states} states, "
				f"chain has {chain.n_states}; request heuristic mode instead")

		self.chain = chain
		self.n = n
		self.flow = np.array(chain.flow_matrix(n))
		self.weights = chain.weights

		n_states = chain.n_states
		self.block = min(n_states, self.settings.block_bits)
		self.walked = list(range(self.block, n_states))

		block_flow = self.flow[:self.block, :self.block]
		# odd block indices are the block subsets containing state 0
		self.block_mass = subset_sums(self.weights[:self.block])[1::2]
		self.block_internal = internal_sums(block_flow)[1::2]
		self.block_cross = {
			s: subset_sums(self.flow[s, :self.block] + self.flow[:self.block, s])[1::2]
			for s in self.walked
		}
		self.full_block_index = self.block_mass.size - 1
		self.walk_mask = sum(1 << s for s in self.walked)

		self.split = min(self.settings.split_bits, len(self.walked))
		self.free = self.walked[:len(self.walked) - self.split]
		self.fixed = self.walked[len(self.walked) - self.split:]

	@property
	def task_count(self) -> int:
		return 1 << self.split

	def extremum(self, family: Family, objective: Objective) -> CutReport:
		logger.info(
			"Enumerating %d subset pairs of %d states (n=%d, %s, %s) in %d tasks",
			1 << (self.chain.n_states - 1), self.chain.n_states, self.n,
			family.value, objective.value, self.task_count)

		tasks = range(self.task_count)
		if self.settings.max_workers > 1 and self.task_count > 1:
			with ThreadPoolExecutor(max_workers=self.settings.max_workers) as pool:
				results: List[Optional[_Candidate]] = list(
					pool.map(lambda t: self._run_task(t, family, objective), tasks))
		else:
			results = [self._run_task(t, family, objective) for t in tasks]

		# merged in task order so the witness does not depend on the worker count
		best: Optional[_Candidate] = None
		for candidate in results:
			if candidate is not None and candidate.beats(best, objective):
				best = candidate

		if best is None:
			raise EmptyFamily(
				f"Every proper subset of the {self.chain.n_states}-state chain has mass 1/2; "
				f"the {family.value} family is empty")

		subset = StateSubset.from_mask(self.chain, best.mask)
		return make_report(self.chain, subset, self.n, Mode.EXACT, family, objective, self.settings.half_tol)

	def _run_task(self, task: int, family: Family, objective: Objective) -> Optional[_Candidate]:
		in_walk = np.zeros(self.chain.n_states, dtype=bool)
		high_mask = 0
		mass = 0.0
		internal = 0.0
		cross = np.zeros_like(self.block_mass)

		def toggle(state: int) -> None:
			nonlocal high_mask, mass, internal, cross
			entering = not in_walk[state]
			in_walk[state] = False
			link = self.flow[state, state] + self.flow[in_walk, state].sum() + self.flow[state, in_walk].sum()
			if entering:
				in_walk[state] = True
				mass += self.weights[state]
				internal += link
				cross = cross + self.block_cross[state]
			else:
				mass -= self.weights[state]
				internal -= link
				cross = cross - self.block_cross[state]
			high_mask ^= 1 << state

		for bit, state in enumerate(self.fixed):
			if task >> bit & 1:
				toggle(state)

		best = self._scan_block(high_mask, mass, internal, cross, family, objective, None)
		for free_bit in gray_flips(len(self.free)):
			toggle(self.free[free_bit])
			best = self._scan_block(high_mask, mass, internal, cross, family, objective, best)
		return best

	def _scan_block(
			self,
			high_mask: int,
			mass: float,
			internal: float,
			cross: np.ndarray,
			family: Family,
			objective: Objective,
			best: Optional[_Candidate],
	) -> Optional[_Candidate]:
		set_mass = mass + self.block_mass
		flow_out = set_mass - (internal + self.block_internal + cross)
		with np.errstate(divide="ignore", invalid="ignore"):
			values = flow_out / (set_mass * (1.0 - set_mass))

		excluded = np.zeros(values.shape, dtype=bool)
		if high_mask == self.walk_mask:
			# every state in A: not a proper subset
			excluded[self.full_block_index] = True
		if family is Family.STRICT_HALF:
			excluded |= np.abs(set_mass - 0.5) <= self.settings.half_tol

		if objective is Objective.MIN:
			values = np.where(excluded, np.inf, values)
			index = int(np.argmin(values))
		else:
			values = np.where(excluded, -np.inf, values)
			index = int(np.argmax(values))
		if not np.isfinite(values[index]):
			return best

		candidate = _Candidate(value=float(values[index]), mask=high_mask | (2 * index + 1))
		return candidate if candidate.beats(best, objective) else best


def exact_extremum(
		chain: MarkovChain,
		n: int,
		family: Family,
		objective: Objective,
		settings: Optional[EnumerationSettings] = None,
) -> CutReport:
	return CutEnumerator(chain, n, settings).extremum(family, objective)

