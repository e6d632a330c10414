"""
Deterministic maximization of the k2 lower-bound objective over
delta in (0, 1/2) and eps1, eps2, eps in (0, 1).

A log-spaced grid (dense near 0, where the objective turns positive) is scanned
first, together with seeds on the curve eps1 = eps2 = sqrt(2 delta / (1 - delta)).
The best point is then refined by coordinate ascent with multiplicative steps
that shrink whenever a full pass brings no improvement.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from markov.bounds.formulas import check_constant, objective_terms
from markov.errors import DomainError
from markov.settings import BoundParams

logger = logging.getLogger(__name__)

Point = Tuple[float, float, float, float]

UPPER = (0.5, 1.0, 1.0, 1.0)


@dataclass(frozen=True)
class K2Bound:
	value: float
	# optimum before clamping at 0
	raw: float
	delta: float
	eps1: float
	eps2: float
	eps: float

	@property
	def argmax(self) -> Point:
		return (self.delta, self.eps1, self.eps2, self.eps)


def _axis(floor: float, upper: float, points: int) -> np.ndarray:
	return np.geomspace(floor, upper, points + 1)[:-1]


def _lowest(terms) -> np.ndarray:
	first, second, third = terms
	return np.minimum(np.minimum(first, second), third)


def _value(k: float, K: float, point: Point) -> float:
	return float(min(objective_terms(k, K, *point)))


def _inside(point: Point) -> bool:
	return all(0 < x < hi for x, hi in zip(point, UPPER))


def _improves(value: float, point: Point, best_value: float, best_point: Point) -> bool:
	return value > best_value or (value == best_value and point < best_point)


def _grid_search(k: float, K: float, params: BoundParams) -> Tuple[float, Point]:
	deltas = _axis(params.grid_floor, UPPER[0], params.grid_points)
	eps_axis = _axis(params.grid_floor, UPPER[1], params.grid_points)
	e1, e2, e = np.meshgrid(eps_axis, eps_axis, eps_axis, indexing="ij")

	best_value = -math.inf
	best_point: Point = (deltas[0], eps_axis[0], eps_axis[0], eps_axis[0])
	for delta in deltas:
		values = _lowest(objective_terms(k, K, delta, e1, e2, e))
		# argmax picks the first maximum, i.e. the lexicographically smallest triple
		index = np.unravel_index(int(np.argmax(values)), values.shape)
		point = (float(delta), float(e1[index]), float(e2[index]), float(e[index]))
		if _improves(float(values[index]), point, best_value, best_point):
			best_value, best_point = float(values[index]), point

	# coupling curve eps1 * eps2 * (1 - delta) = 2 delta
	for delta in deltas:
		coupled = math.sqrt(2.0 * delta / (1.0 - delta))
		if coupled >= 1.0:
			continue
		values = _lowest(objective_terms(k, K, delta, coupled, coupled, eps_axis))
		index = int(np.argmax(values))
		point = (float(delta), coupled, coupled, float(eps_axis[index]))
		if _improves(float(values[index]), point, best_value, best_point):
			best_value, best_point = float(values[index]), point
	return best_value, best_point


def _coordinate_ascent(k: float, K: float, start: Point, start_value: float, params: BoundParams) -> Tuple[float, Point]:
	ratio = (1.0 / params.grid_floor) ** (1.0 / params.grid_points)
	step = math.log(ratio)
	point, value = list(start), start_value

	for _ in range(params.refine_iterations):
		improved = False
		for axis in range(4):
			for direction in (1.0, -1.0):
				candidate = list(point)
				candidate[axis] = point[axis] * math.exp(direction * step)
				if not _inside(tuple(candidate)):
					continue
				candidate_value = _value(k, K, tuple(candidate))
				if candidate_value > value:
					point, value = candidate, candidate_value
					improved = True
					break
		if not improved:
			step *= params.shrink
	return value, tuple(point)


def k2_lower_bound(k: float, K: float, params: Optional[BoundParams] = None) -> K2Bound:
	"""
	Lower bound on k2 from k and K, clamped below at 0.

	Returns 0 whenever K = 2: every third term is then negative.
	"""
	params = params or BoundParams()
	k = check_constant("k", k)
	if not 0 < K <= 2 + 1e-9:
		raise DomainError(f"K={K} must lie in (0, 2]")
	K = min(float(K), 2.0)

	grid_value, grid_point = _grid_search(k, K, params)
	value, point = _coordinate_ascent(k, K, grid_point, grid_value, params)
	logger.debug("k2 bound for k=%.6g, K=%.6g: grid %.6g, refined %.6g at %s", k, K, grid_value, value, point)

	return K2Bound(
		value=max(0.0, value),
		raw=value,
		delta=point[0],
		eps1=point[1],
		eps2=point[2],
		eps=point[3],
	)
