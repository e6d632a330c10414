from markov.isoperimetry.constants import K_sup, k_inf
from markov.isoperimetry.cuts import (
	CutReport,
	Family,
	Mode,
	Objective,
	StateSubset,
	escape_fractions,
	flow_out,
	k_of_set,
	naive_extremum,
)
from markov.isoperimetry.enumeration import CutEnumerator, exact_extremum
from markov.isoperimetry.heuristics import local_search_bound, sweep_cut_bound
