"""
Per-set isoperimetric quantities: the flow out of A, k_n(A), and the reports
that carry an extremal value together with its witnessing subset.
"""

import enum
from dataclasses import dataclass
from typing import Iterable, Optional, Tuple

import numpy as np

from markov.chain.core import MarkovChain
from markov.errors import DomainError, EmptyFamily


class Family(str, enum.Enum):
	"""Which subsets an extremum ranges over."""

	STRICT_HALF = "strict-half"  # 0 < pi(A) < 1/2
	CLOSED_HALF = "closed-half"  # 0 < pi(A) <= 1/2
	ALL_PROPER = "all-proper"

	@classmethod
	def parse(cls, value: str) -> "Family":
		aliases = {"strict": cls.STRICT_HALF, "closed": cls.CLOSED_HALF, "all": cls.ALL_PROPER}
		if value in aliases:
			return aliases[value]
		return cls(value)


class Mode(str, enum.Enum):
	EXACT = "exact"
	SWEEP = "sweep-heuristic"
	LOCAL_SEARCH = "local-search-heuristic"


class Objective(str, enum.Enum):
	MIN = "min"
	MAX = "max"


@dataclass(frozen=True)
class StateSubset:
	"""A nonempty proper subset of the states, stored as a bitmask (bit i is state i)."""

	mask: int
	n_states: int
	mass: float

	@classmethod
	def from_mask(cls, chain: MarkovChain, mask: int) -> "StateSubset":
		full = (1 << chain.n_states) - 1
		if mask <= 0 or mask >= full:
			raise DomainError(f"Subset mask {mask:#x} is not a nonempty proper subset of {chain.n_states} states")
		indicator = _indicator(mask, chain.n_states)
		return cls(mask=mask, n_states=chain.n_states, mass=float(chain.weights[indicator].sum()))

	@classmethod
	def from_states(cls, chain: MarkovChain, states: Iterable[int]) -> "StateSubset":
		mask = 0
		for state in states:
			if not 0 <= state < chain.n_states:
				raise DomainError(f"State {state} is outside 0..{chain.n_states - 1}")
			mask |= 1 << state
		return cls.from_mask(chain, mask)

	@property
	def states(self) -> Tuple[int, ...]:
		return tuple(i for i in range(self.n_states) if self.mask >> i & 1)

	@property
	def indicator(self) -> np.ndarray:
		return _indicator(self.mask, self.n_states)

	def complement(self, chain: MarkovChain) -> "StateSubset":
		return StateSubset.from_mask(chain, ((1 << self.n_states) - 1) ^ self.mask)


def _indicator(mask: int, n_states: int) -> np.ndarray:
	return np.array([(mask >> i) & 1 for i in range(n_states)], dtype=bool)


@dataclass(frozen=True)
class CutReport:
	value: float
	subset: StateSubset
	n_steps: int
	mode: Mode
	family: Family
	objective: Objective

	@property
	def exact(self) -> bool:
		return self.mode is Mode.EXACT


def flow_out(chain: MarkovChain, subset: StateSubset, n: int = 1) -> float:
	"""sum over x in A, y not in A of pi_x p^n(x, y)."""
	inside = subset.indicator
	flow = chain.flow_matrix(n)
	return float(flow[np.ix_(inside, ~inside)].sum())


def k_of_set(chain: MarkovChain, subset: StateSubset, n: int = 1) -> float:
	"""k_n(A) = flow_out(A) / (pi(A) pi(A^c))."""
	inside = subset.indicator
	mass_in = float(chain.weights[inside].sum())
	mass_out = float(chain.weights[~inside].sum())
	return flow_out(chain, subset, n) / (mass_in * mass_out)


def escape_fractions(chain: MarkovChain, subset: StateSubset) -> Tuple[float, float]:
	"""
	(alpha, beta) with flow(A -> A^c) = alpha pi(A) and flow(A^c -> A) = beta pi(A^c).

	Both lie in [0, 1] and k(A) = alpha / pi(A^c) = beta / pi(A), so k(A) <= 2 with
	equality only when alpha = beta = 1 and pi(A) = 1/2.
	"""
	inside = subset.indicator
	flow = chain.flow
	alpha = float(flow[np.ix_(inside, ~inside)].sum()) / subset.mass
	beta = float(flow[np.ix_(~inside, inside)].sum()) / float(chain.weights[~inside].sum())
	return alpha, beta


def admits(family: Family, mass: float, half_tol: float) -> bool:
	"""Whether a set of the given mass belongs to ``family``."""
	if family is Family.STRICT_HALF:
		return mass < 0.5 - half_tol
	if family is Family.CLOSED_HALF:
		return mass <= 0.5 + half_tol
	return True


def pair_admits(family: Family, mass: float, half_tol: float) -> bool:
	"""Whether the pair {A, A^c} has a member in ``family``; k is equal on both."""
	if family is Family.STRICT_HALF:
		return abs(mass - 0.5) > half_tol
	return True


def oriented(chain: MarkovChain, subset: StateSubset, family: Family, half_tol: float) -> StateSubset:
	"""Pick the member of {A, A^c} that lies in ``family``."""
	if family is Family.ALL_PROPER or subset.mass <= 0.5 + half_tol:
		return subset
	return subset.complement(chain)


def make_report(
		chain: MarkovChain,
		subset: StateSubset,
		n: int,
		mode: Mode,
		family: Family,
		objective: Objective,
		half_tol: float,
) -> CutReport:
	"""Orient the witness into its family and recompute the value from it directly."""
	witness = oriented(chain, subset, family, half_tol)
	return CutReport(
		value=k_of_set(chain, witness, n),
		subset=witness,
		n_steps=n,
		mode=mode,
		family=family,
		objective=objective,
	)


def naive_extremum(
		chain: MarkovChain,
		n: int = 1,
		family: Family = Family.CLOSED_HALF,
		objective: Objective = Objective.MIN,
		half_tol: float = 1e-12,
) -> CutReport:
	"""
	Scan every nonempty proper subset and recompute k_n(A) from scratch.

	Exponential in the state count with an O(n^2) step; it is the reference the
	Gray-code enumerator is measured against.
	"""
	best: Optional[Tuple[float, StateSubset]] = None
	for mask in range(1, (1 << chain.n_states) - 1):
		subset = StateSubset.from_mask(chain, mask)
		if not admits(family, subset.mass, half_tol):
			continue
		value = k_of_set(chain, subset, n)
		if best is None or (value < best[0] if objective is Objective.MIN else value > best[0]):
			best = (value, subset)

	if best is None:
		raise EmptyFamily(f"No subset of {chain.n_states} states satisfies the {family.value} constraint")
	return CutReport(
		value=best[0],
		subset=best[1],
		n_steps=n,
		mode=Mode.EXACT,
		family=family,
		objective=objective,
	)
