"""Small dense linear algebra on R^4 and on the 6-dimensional space of 2-forms.

Two-forms are stored as 6-vectors in the lexicographic basis
(e12, e13, e14, e23, e24, e34); every 6x6 matrix in the package uses
that order.  Orientation is the standard one, e1^e2^e3^e4.
"""

from __future__ import annotations

import itertools

import numpy as np

from .errors import NonSymmetric, ZeroVector

DIM = 4

#: index pairs (0-based) of the canonical 2-form basis
PAIRS: tuple[tuple[int, int], ...] = tuple(itertools.combinations(range(DIM), 2))
PAIR_INDEX = {pair: n for n, pair in enumerate(PAIRS)}
PAIR_LABELS = tuple(f"e{i + 1}{j + 1}" for i, j in PAIRS)

SYM_TOL = 1e-12
_MAX_SWEEPS = 60


def _hodge_matrix() -> np.ndarray:
    # *(e^ij) = sign(i,j,k,l) e^kl with {k,l} the complementary pair
    star = np.zeros((6, 6))
    for col, (i, j) in enumerate(PAIRS):
        k, l = (m for m in range(DIM) if m not in (i, j))
        perm = (i, j, k, l)
        inversions = sum(perm[a] > perm[b] for a in range(4) for b in range(a + 1, 4))
        star[PAIR_INDEX[(k, l)], col] = -1.0 if inversions % 2 else 1.0
    return star


HODGE = _hodge_matrix()
HODGE.flags.writeable = False


def two_form(**coeffs: float) -> np.ndarray:
    """Build a 2-form from keyword coefficients, e.g. ``two_form(e12=1, e34=1)``."""
    out = np.zeros(6)
    for name, value in coeffs.items():
        out[PAIR_LABELS.index(name)] = value
    return out


def hodge_star(omega) -> np.ndarray:
    return HODGE @ np.asarray(omega, dtype=float)


def sd_basis() -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Return the unnormalised bases (f1+, f2+, f3+) and (f1-, f2-, f3-).

    f1 = e12 +/- e34, f2 = e13 -/+ e24, f3 = e14 +/- e23.  Each form has
    squared norm 2.
    """
    plus = [two_form(e12=1, e34=1), two_form(e13=1, e24=-1), two_form(e14=1, e23=1)]
    minus = [two_form(e12=1, e34=-1), two_form(e13=1, e24=1), two_form(e14=1, e23=-1)]
    return plus, minus


def sd_change_of_basis() -> np.ndarray:
    """Orthogonal 6x6 matrix whose columns are f1+,f2+,f3+,f1-,f2-,f3- over sqrt(2)."""
    plus, minus = sd_basis()
    return np.column_stack(plus + minus) / np.sqrt(2.0)


def check_symmetric(S, tol: float = SYM_TOL) -> np.ndarray:
    S = np.asarray(S, dtype=float)
    if S.ndim < 2 or S.shape[-1] != S.shape[-2]:
        raise NonSymmetric(f"expected square matrices, got shape {S.shape}")
    scale = 1.0 + np.max(np.abs(S), initial=0.0)
    defect = np.max(np.abs(S - np.swapaxes(S, -1, -2)), initial=0.0)
    if defect > tol * scale:
        raise NonSymmetric(f"asymmetry {defect:.3e} exceeds {tol:.1e}")
    return 0.5 * (S + np.swapaxes(S, -1, -2))


def _jacobi_batch(A: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi rotations on a stack of symmetric matrices (in place on a copy)."""
    A = A.copy()
    n = A.shape[-1]
    V = np.broadcast_to(np.eye(n), A.shape).copy()
    scale = np.sqrt(np.sum(A * A, axis=(-1, -2)))
    pairs = list(itertools.combinations(range(n), 2))
    offdiag = ~np.eye(n, dtype=bool)
    for _ in range(_MAX_SWEEPS):
        off = np.sqrt(np.sum(A[:, offdiag] ** 2, axis=-1))
        if np.all(off <= 1e-15 * scale) or not pairs:
            break
        for p, q in pairs:
            apq = A[:, p, q]
            active = np.abs(apq) > 1e-300
            if not np.any(active):
                continue
            denom = np.where(active, 2.0 * apq, 1.0)
            theta = (A[:, q, q] - A[:, p, p]) / denom
            sgn = np.where(theta >= 0, 1.0, -1.0)
            with np.errstate(over="ignore"):
                t = sgn / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
            t = np.where(active & np.isfinite(theta), t, 0.0)
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            cc, ss = c[:, None], s[:, None]
            colp, colq = A[:, :, p].copy(), A[:, :, q].copy()
            A[:, :, p] = cc * colp - ss * colq
            A[:, :, q] = ss * colp + cc * colq
            rowp, rowq = A[:, p, :].copy(), A[:, q, :].copy()
            A[:, p, :] = cc * rowp - ss * rowq
            A[:, q, :] = ss * rowp + cc * rowq
            A[:, p, q] = 0.0
            A[:, q, p] = 0.0
            vp, vq = V[:, :, p].copy(), V[:, :, q].copy()
            V[:, :, p] = cc * vp - ss * vq
            V[:, :, q] = ss * vp + cc * vq
    w = np.diagonal(A, axis1=-2, axis2=-1).copy()
    order = np.argsort(w, axis=-1, kind="stable")
    w = np.take_along_axis(w, order, axis=-1)
    V = np.take_along_axis(V, order[:, None, :], axis=-1)
    return w, V


def sym_eigen(S, tol: float = SYM_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a small symmetric matrix by cyclic Jacobi rotations.

    Returns ``(w, V)`` with ``w`` ascending and the columns of ``V`` an
    orthonormal eigenbasis.  Within a cluster of (near-)equal eigenvalues the
    vectors are an arbitrary orthonormal basis of the cluster.

    Raises NonSymmetric if ``S`` is not symmetric to within ``tol``.
    """
    S = check_symmetric(S, tol)
    w, V = _jacobi_batch(S[None])
    return w[0], V[0]


def sym_eigvals_batch(stack, tol: float = SYM_TOL) -> np.ndarray:
    """Ascending eigenvalues for a stack of symmetric matrices, shape (N, n, n)."""
    stack = check_symmetric(np.asarray(stack, dtype=float), tol)
    if stack.ndim == 2:
        stack = stack[None]
    w, _ = _jacobi_batch(stack)
    return w


def extend_to_oriented_onb(x) -> np.ndarray:
    """Orthonormal, positively oriented basis (as matrix columns) whose first vector is x/|x|.

    Uses a Householder reflection taking e1 to the unit vector, then fixes
    the orientation with one sign flip.
    """
    x = np.asarray(x, dtype=float)
    nrm = np.linalg.norm(x)
    if not nrm > 1e-12:
        raise ZeroVector("cannot extend a (near-)zero vector to a basis")
    u = x / nrm
    e1 = np.zeros(DIM)
    e1[0] = 1.0
    if u[0] >= 0.0:
        v = e1 + u
        E = np.eye(DIM) - 2.0 * np.outer(v, v) / (v @ v)
        E[:, 0] = -E[:, 0]  # H e1 = -u; det flips to +1
    else:
        v = e1 - u
        E = np.eye(DIM) - 2.0 * np.outer(v, v) / (v @ v)
        E[:, -1] = -E[:, -1]
    E[:, 0] = u
    return E


def orientation(basis) -> int:
    return 1 if np.linalg.det(np.asarray(basis, dtype=float)) > 0 else -1


def is_orthonormal(basis, tol: float = 1e-10) -> bool:
    B = np.asarray(basis, dtype=float)
    return B.shape == (DIM, DIM) and bool(np.max(np.abs(B.T @ B - np.eye(DIM))) <= tol)


def random_orthogonal(rng: np.random.Generator, det: int = 1) -> np.ndarray:
    """Haar-distributed orthogonal 4x4 matrix with the requested determinant sign."""
    Q, Rm = np.linalg.qr(rng.standard_normal((DIM, DIM)))
    Q = Q * np.sign(np.diag(Rm))
    if np.linalg.det(Q) * det < 0:
        Q[:, -1] = -Q[:, -1]
    return Q
