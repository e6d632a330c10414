"""Cyclic Jacobi eigensolver for dense real symmetric matrices."""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from markov.errors import DimensionMismatch, NoConvergence
from markov.settings import EigenSettings

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class EigenDecomposition:
	# sorted descending; vectors[:, i] belongs to values[i]
	values: np.ndarray
	vectors: np.ndarray
	sweeps: int
	off_norm: float


def off_diagonal_norm(matrix: np.ndarray) -> float:
	return float(np.linalg.norm(matrix - np.diag(np.diag(matrix))))


def _rotate(a: np.ndarray, v: np.ndarray, p: int, q: int) -> None:
	apq = a[p, q]
	if apq == 0.0:
		return
	tau = (a[q, q] - a[p, p]) / (2.0 * apq)
	if tau >= 0:
		t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
	else:
		t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
	c = 1.0 / np.sqrt(1.0 + t * t)
	s = t * c

	col_p = a[:, p].copy()
	col_q = a[:, q].copy()
	a[:, p] = c * col_p - s * col_q
	a[:, q] = s * col_p + c * col_q

	row_p = a[p, :].copy()
	row_q = a[q, :].copy()
	a[p, :] = c * row_p - s * row_q
	a[q, :] = s * row_p + c * row_q
	a[p, q] = a[q, p] = 0.0

	vec_p = v[:, p].copy()
	vec_q = v[:, q].copy()
	v[:, p] = c * vec_p - s * vec_q
	v[:, q] = s * vec_p + c * vec_q


def jacobi_eigh(matrix: np.ndarray, settings: Optional[EigenSettings] = None) -> EigenDecomposition:
	"""
	Diagonalize a symmetric matrix by sweeps of plane rotations in row-cyclic order.

	The input is not modified; the solver works on the symmetric part of a copy.
	Stops once the off-diagonal Frobenius norm falls below ``off_tol`` (scaled by the
	matrix norm when that exceeds one) and raises ``NoConvergence`` after
	``max_sweeps`` sweeps.
	"""
	settings = settings or EigenSettings()
	a = np.array(matrix, dtype=float)
	if a.ndim != 2 or a.shape[0] != a.shape[1]:
		raise DimensionMismatch(f"Eigensolver needs a square matrix, got shape {a.shape}")
	a = 0.5 * (a + a.T)
	n = a.shape[0]
	v = np.eye(n)

	threshold = settings.off_tol * max(1.0, float(np.linalg.norm(a)))
	off = off_diagonal_norm(a)
	sweeps = 0
	while off > threshold:
		if sweeps == settings.max_sweeps:
			raise NoConvergence(
				f"Jacobi iteration did not converge in {settings.max_sweeps} sweeps (off-diagonal norm {off:.3g})")
		for p in range(n - 1):
			for q in range(p + 1, n):
				_rotate(a, v, p, q)
		sweeps += 1
		off = off_diagonal_norm(a)

	logger.debug("Jacobi converged after %d sweeps, off-diagonal norm %.3g", sweeps, off)
	order = np.argsort(-np.diag(a), kind="stable")
	return EigenDecomposition(values=np.diag(a)[order], vectors=v[:, order], sweeps=sweeps, off_norm=off)
