"""Transition matrices for the built-in chain families."""

from typing import Any, Callable, Dict

import numpy as np

from markov.errors import BadParams


def _check_size(size: int, minimum: int = 2) -> int:
	if int(size) != size or size < minimum:
		raise BadParams(f"size must be an integer >= {minimum}, got {size}")
	return int(size)


def _probability(name: str, value: Any, low_open: bool = False, high_open: bool = False) -> float:
	try:
		value = float(value)
	except (TypeError, ValueError) as e:
		raise BadParams(f"{name} must be a number, got {value!r}") from e
	if (value < 0 or (low_open and value == 0)) or (value > 1 or (high_open and value == 1)):
		raise BadParams(f"{name}={value} is outside its allowed range")
	return value


def cycle(size: int) -> np.ndarray:
	"""Symmetric nearest-neighbour walk on Z/size; size 2 is the swap chain."""
	n = _check_size(size)
	p = np.zeros((n, n))
	states = np.arange(n)
	np.add.at(p, (states, (states + 1) % n), 0.5)
	np.add.at(p, (states, (states - 1) % n), 0.5)
	return p


def lazy_cycle(size: int, hold: float = 0.5) -> np.ndarray:
	hold = _probability("hold", hold, high_open=True)
	n = _check_size(size)
	return hold * np.eye(n) + (1.0 - hold) * cycle(n)


def complete(size: int) -> np.ndarray:
	"""Uniform jumps, self-loops included."""
	n = _check_size(size)
	return np.full((n, n), 1.0 / n)


def birth_death(size: int, up: float = 0.5, down: float = 0.5) -> np.ndarray:
	"""Tridiagonal chain; the leftover mass of each row stays put."""
	n = _check_size(size)
	up = _probability("up", up, low_open=True)
	down = _probability("down", down, low_open=True)
	if up + down > 1:
		raise BadParams(f"up + down must not exceed 1, got {up + down}")

	p = np.zeros((n, n))
	for i in range(n):
		if i + 1 < n:
			p[i, i + 1] = up
		if i > 0:
			p[i, i - 1] = down
		p[i, i] = 1.0 - p[i].sum()
	return p


def path(size: int) -> np.ndarray:
	"""Simple random walk on the path graph; the end states step inwards surely."""
	n = _check_size(size)
	p = np.zeros((n, n))
	for i in range(n):
		neighbours = [j for j in (i - 1, i + 1) if 0 <= j < n]
		p[i, neighbours] = 1.0 / len(neighbours)
	return p


def random_reversible(size: int, seed: int = 0, density: float = 1.0) -> np.ndarray:
	"""
	Normalized rows of a seeded symmetric weight matrix W.

	The result is reversible with respect to pi_i proportional to sum_j W[i][j].
	With density < 1 each off-diagonal pair is kept with that probability; the
	ring i -> i+1 is always kept so the chain stays irreducible.
	"""
	n = _check_size(size)
	density = _probability("density", density, low_open=True)
	rng = np.random.default_rng(seed)

	upper = np.triu(rng.uniform(0.0, 1.0, size=(n, n)))
	if density < 1:
		keep = np.triu(rng.uniform(0.0, 1.0, size=(n, n)) < density, k=1)
		ring = np.zeros((n, n), dtype=bool)
		for i in range(n):
			a, b = sorted((i, (i + 1) % n))
			ring[a, b] = a != b
		keep |= ring
		keep |= np.eye(n, dtype=bool)
		upper = np.where(keep, upper, 0.0)
	weights = upper + np.triu(upper, k=1).T
	return weights / weights.sum(axis=1, keepdims=True)


FAMILIES: Dict[str, Callable[..., np.ndarray]] = {
	"cycle": cycle,
	"lazy-cycle": lazy_cycle,
	"complete": complete,
	"birth-death": birth_death,
	"path": path,
	"random-reversible": random_reversible,
}
