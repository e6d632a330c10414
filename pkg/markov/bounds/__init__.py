from markov.bounds.formulas import (
	Interval,
	k2_objective,
	lawler_sokal_interval,
	objective_terms,
	proposition_interval,
	theorem2_interval,
)
from markov.bounds.optimizer import K2Bound, k2_lower_bound
from markov.bounds.verdict import (
	BoundReport,
	ContainmentCheck,
	Theorem2Verdict,
	classify,
	lemma_checks,
	verify_report,
)
