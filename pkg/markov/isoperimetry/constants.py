"""The extremal constants k_n (infimum) and K (supremum), exact or heuristic."""

import logging
from typing import Optional

from markov.chain.core import MarkovChain
from markov.errors import EmptyFamily
from markov.isoperimetry.cuts import CutReport, Family, Objective
from markov.isoperimetry.enumeration import exact_extremum
from markov.isoperimetry.heuristics import local_search_bound, sweep_cut_bound
from markov.settings import EigenSettings, EnumerationSettings

logger = logging.getLogger(__name__)


def _heuristic(
		chain: MarkovChain,
		n: int,
		family: Family,
		objective: Objective,
		settings: EnumerationSettings,
		eigen_settings: Optional[EigenSettings],
) -> CutReport:
	candidates = [
		local_search_bound(chain, n, objective, settings.seed, settings.restarts, family, settings),
	]
	if chain.reversible:
		candidates.insert(0, sweep_cut_bound(chain, n, family, objective, settings, eigen_settings))

	best = candidates[0]
	for candidate in candidates[1:]:
		if (candidate.value < best.value) if objective is Objective.MIN else (candidate.value > best.value):
			best = candidate
	logger.warning(
		"Heuristic %s for n=%d: %.17g is a one-sided bound (%s)",
		"infimum" if objective is Objective.MIN else "supremum", n, best.value, best.mode.value)
	return best


def k_inf(
		chain: MarkovChain,
		n: int = 1,
		family: Family = Family.CLOSED_HALF,
		settings: Optional[EnumerationSettings] = None,
		heuristic: bool = False,
		eigen_settings: Optional[EigenSettings] = None,
) -> CutReport:
	"""
	k_n over the strict-half (0 < pi(A) < 1/2) or closed-half (0 < pi(A) <= 1/2) family.

	Exact mode raises ``StateSpaceTooLarge`` above the enumeration threshold.
	Heuristic mode returns an upper bound on the infimum.
	"""
	settings = settings or EnumerationSettings()
	if family is Family.ALL_PROPER:
		family = Family.CLOSED_HALF
	if heuristic:
		return _heuristic(chain, n, family, Objective.MIN, settings, eigen_settings)

	try:
		return exact_extremum(chain, n, family, Objective.MIN, settings)
	except EmptyFamily as e:
		if family is not Family.STRICT_HALF:
			raise
		closed = exact_extremum(chain, n, Family.CLOSED_HALF, Objective.MIN, settings)
		raise EmptyFamily(f"{e}; the closed-half value is {closed.value:.17g}", closed_value=closed.value) from e


def K_sup(
		chain: MarkovChain,
		settings: Optional[EnumerationSettings] = None,
		heuristic: bool = False,
		eigen_settings: Optional[EigenSettings] = None,
) -> CutReport:
	"""K = sup of k(A) over all nonempty proper subsets; heuristic mode gives a lower bound."""
	settings = settings or EnumerationSettings()
	if heuristic:
		return _heuristic(chain, 1, Family.ALL_PROPER, Objective.MAX, settings, eigen_settings)
	return exact_extremum(chain, 1, Family.ALL_PROPER, Objective.MAX, settings)
