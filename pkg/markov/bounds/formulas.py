"""Closed-form spectral bounds in terms of the isoperimetric constants."""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from markov.errors import DomainError
from markov.settings import BoundParams

CONSTANT_SLACK = 1e-9


@dataclass(frozen=True)
class Interval:
	lower: float
	upper: float

	@property
	def well_formed(self) -> bool:
		return self.lower <= self.upper

	def contains(self, value: float, margin: float = 0.0) -> bool:
		return self.lower - margin <= value <= self.upper + margin


def check_constant(name: str, value: float) -> float:
	if not -CONSTANT_SLACK <= value <= 2 + CONSTANT_SLACK:
		raise DomainError(f"{name}={value} lies outside [0, 2]")
	return min(max(float(value), 0.0), 2.0)


def lawler_sokal_interval(k: float, params: Optional[BoundParams] = None) -> Interval:
	"""[kappa k^2 / 8, k], the range that must contain the gap at 1."""
	params = params or BoundParams()
	k = check_constant("k", k)
	return Interval(lower=params.kappa * k * k / 8.0, upper=k)


def _root_term(k2: float, kappa: float) -> float:
	return math.sqrt(max(0.0, 1.0 - kappa * k2 * k2 / 8.0))


def proposition_interval(k2: float, params: Optional[BoundParams] = None) -> Interval:
	"""Spectrum of P on mean-zero functions via P^2: [-sqrt(1 - kappa k2^2/8), +sqrt(...)]."""
	params = params or BoundParams()
	root = _root_term(check_constant("k2", k2), params.kappa)
	return Interval(lower=-root, upper=root)


def theorem2_interval(k: float, k2: float, params: Optional[BoundParams] = None) -> Interval:
	"""[-sqrt(1 - kappa k2^2/8), min(sqrt(1 - kappa k2^2/8), 1 - kappa k^2/8)]."""
	params = params or BoundParams()
	k = check_constant("k", k)
	root = _root_term(check_constant("k2", k2), params.kappa)
	return Interval(lower=-root, upper=min(root, 1.0 - params.kappa * k * k / 8.0))


def check_box(delta: float, eps1: float, eps2: float, eps: float, K: float) -> None:
	if not 0 < delta < 0.5:
		raise DomainError(f"delta={delta} must lie in (0, 1/2)")
	for name, value in (("eps1", eps1), ("eps2", eps2), ("eps", eps)):
		if not 0 < value < 1:
			raise DomainError(f"{name}={value} must lie in (0, 1)")
	if K <= 0:
		raise DomainError(f"K={K} must be positive")


def objective_terms(k, K, delta, eps1, eps2, eps):
	"""The three lower-bound terms for k2; broadcasts over numpy arrays."""
	first = k * k * delta / 16.0
	second = k / 4.0 * (eps1 * eps2 * (1.0 - delta) - delta)
	third = eps * (
		k * ((2.0 - eps) * (1.0 - eps1) * (1.0 - eps2) * (1.0 - delta) / ((1.0 - eps) * K) - 1.0 / (1.0 - eps))
		- eps / (1.0 - eps)
	)
	return first, second, third


def k2_objective(k: float, K: float, delta: float, eps1: float, eps2: float, eps: float) -> float:
	"""Minimum of the three terms; may be negative."""
	check_box(delta, eps1, eps2, eps, K)
	k = check_constant("k", k)
	return float(np.min(objective_terms(k, K, delta, eps1, eps2, eps)))
