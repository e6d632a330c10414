"""Exception hierarchy shared by every area of the package."""

from typing import Optional


class MarkovChainError(ValueError):
	"""Base class for all errors raised by the package."""


class ConfigError(MarkovChainError):
	pass


# chain construction

class NotStochastic(MarkovChainError):
	pass


class NotIrreducible(MarkovChainError):
	pass


class ZeroMassState(MarkovChainError):
	pass


class SingularSystem(MarkovChainError):
	pass


class NotReversible(MarkovChainError):
	pass


# spectra

class NoConvergence(MarkovChainError):
	pass


class NotMeanZero(MarkovChainError):
	pass


# isoperimetry

class StateSpaceTooLarge(MarkovChainError):
	pass


class EmptyFamily(MarkovChainError):
	"""Raised when no proper subset satisfies the strict pi(A) < 1/2 constraint."""

	def __init__(self, message: str, closed_value: Optional[float] = None):
		super().__init__(message)
		self.closed_value = closed_value


# bounds

class DomainError(MarkovChainError):
	pass


# input files and generators

class BadParams(MarkovChainError):
	pass


class ParseError(MarkovChainError):
	def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
		location = ""
		if line is not None:
			location = f" (line {line}" + (f", column {column})" if column is not None else ")")
		super().__init__(f"{message}{location}")
		self.line = line
		self.column = column


class DimensionMismatch(MarkovChainError):
	pass


class ValidationError(MarkovChainError):
	pass
