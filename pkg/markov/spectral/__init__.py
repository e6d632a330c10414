from markov.spectral.jacobi import EigenDecomposition, jacobi_eigh
from markov.spectral.spectrum import (
	SpectrumReport,
	TestFunction,
	decay_rate,
	normalize_test_function,
	right_eigenvectors,
	spectrum,
	spectrum_of_square,
	symmetrize,
)
