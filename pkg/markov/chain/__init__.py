from markov.chain.core import (
	MarkovChain,
	NStepKernel,
	StationaryDistribution,
	TransitionKernel,
	apply_kernel,
	build_chain,
	detailed_balance_residual,
	lazify,
	n_step_kernel,
	stationary_distribution,
)
