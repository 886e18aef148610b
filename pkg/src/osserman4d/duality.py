"""Curvature operators on 2-forms and the self-dual / anti-self-dual split."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import curvature
from .errors import BadParameters
from .lintensor import PAIRS, check_symmetric, sd_change_of_basis, sym_eigen

CONFORMALLY_FLAT = "ConformallyFlat"
SELF_DUAL = "SelfDual"
ANTI_SELF_DUAL = "AntiSelfDual"
NEITHER = "Neither"
HALF_FLAT = (CONFORMALLY_FLAT, SELF_DUAL, ANTI_SELF_DUAL)

DEFAULT_TOL = 1e-8

_F = sd_change_of_basis()
_ROWS, _COLS = np.array(PAIRS).T


@dataclass(frozen=True)
class DualityReport:
    cls: str
    norm_plus: float
    norm_minus: float
    norm_cross: float
    plus_eigenvalues: np.ndarray
    minus_eigenvalues: np.ndarray

    def as_dict(self) -> dict:
        return {
            "class": self.cls,
            "norm_plus": self.norm_plus,
            "norm_minus": self.norm_minus,
            "norm_cross": self.norm_cross,
            "plus_eigenvalues": [float(v) for v in self.plus_eigenvalues],
            "minus_eigenvalues": [float(v) for v in self.minus_eigenvalues],
        }


def lambda2(W) -> np.ndarray:
    """6x6 matrix of e^pq -> sum_{i<j} W_pqij e^ij in the canonical basis.

    The factor 1/2 of the full index sum cancels the double count of
    ordered pairs, so the entry in row ij, column pq is simply W_pqij.
    """
    W = np.asarray(W, dtype=float)
    by_input = W[_ROWS[:, None], _COLS[:, None], _ROWS[None, :], _COLS[None, :]]  # [pq, ij]
    return by_input.T


def from_lambda2(M) -> np.ndarray:
    """Inverse of :func:`lambda2` for a symmetric 6x6 matrix (Bianchi not imposed)."""
    M = check_symmetric(M)
    T = np.zeros(curvature.SHAPE)
    for col, (p, q) in enumerate(PAIRS):
        for row, (i, j) in enumerate(PAIRS):
            v = M[row, col]
            T[p, q, i, j] = v
            T[q, p, i, j] = -v
            T[p, q, j, i] = -v
            T[q, p, j, i] = v
    return T


def sd_blocks(op) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Blocks (plus, minus, cross) of a 2-form operator in the orthonormal f+/f- basis."""
    B = _F.T @ np.asarray(op, dtype=float) @ _F
    return B[:3, :3], B[3:, 3:], B[:3, 3:]


def classify(R, tol: float = DEFAULT_TOL) -> DualityReport:
    """Classify the Weyl part of R as conformally flat, (anti-)self-dual or neither.

    With N = |W+| + |W-|: conformally flat if N <= tol (1 + |R|); self-dual
    if |W-| <= tol N < |W+|; anti-self-dual symmetrically; otherwise neither.
    The branches are tested in that order.
    """
    if not 0 < tol < 0.5:
        raise BadParameters(f"tol must lie in (0, 0.5), got {tol}")
    W = curvature.weyl(R)
    plus, minus, cross = sd_blocks(lambda2(W))
    n_plus, n_minus = float(np.linalg.norm(plus)), float(np.linalg.norm(minus))
    total = n_plus + n_minus
    if total <= tol * (1.0 + curvature.norm(R)):
        cls = CONFORMALLY_FLAT
    elif n_minus <= tol * total < n_plus:
        cls = SELF_DUAL
    elif n_plus <= tol * total < n_minus:
        cls = ANTI_SELF_DUAL
    else:
        cls = NEITHER
    return DualityReport(
        cls=cls,
        norm_plus=n_plus,
        norm_minus=n_minus,
        norm_cross=float(np.linalg.norm(cross)),
        plus_eigenvalues=sym_eigen(0.5 * (plus + plus.T))[0],
        minus_eigenvalues=sym_eigen(0.5 * (minus + minus.T))[0],
    )
