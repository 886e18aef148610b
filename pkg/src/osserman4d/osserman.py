"""Jacobi operators and the (conformally) Osserman decision procedures."""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field

import numpy as np

from . import curvature
from .errors import BadParameters
from .lintensor import DIM, extend_to_oriented_onb, sym_eigen, sym_eigvals_batch

DEFAULT_TOL = 1e-8
DEFAULT_DIRECTIONS = 200

# Kronecker sequence increments from the real root of x^4 = x + 1
_PHI3 = 1.2207440846057596
_ALPHA = np.array([_PHI3**-1, _PHI3**-2, _PHI3**-3])

_GRID_RADIUS = 3


@dataclass(frozen=True)
class JacobiSpectrum:
    eigenvalues: np.ndarray
    direction: np.ndarray


@dataclass(frozen=True)
class SampledDecision:
    osserman: bool
    spectrum: np.ndarray
    deviation: float
    threshold: float
    worst_direction: np.ndarray
    n_directions: int


@dataclass(frozen=True)
class ExactDecision:
    osserman: bool
    max_coefficient: float
    tol: float
    certificate: dict | None = None
    reference: np.ndarray = field(default_factory=lambda: np.zeros(4))


@dataclass(frozen=True)
class AdaptedFrame:
    basis: np.ndarray
    abc: np.ndarray
    flipped: bool


def jacobi_op(R, x) -> np.ndarray:
    """Matrix of y -> R(y, x)x, i.e. ``<J(x) y, z> = R(y, x, x, z)``."""
    x = np.asarray(x, dtype=float)
    J = np.einsum("bkla,k,l->ab", np.asarray(R, dtype=float), x, x)
    return 0.5 * (J + J.T)


def jacobi_ops(R, xs) -> np.ndarray:
    """Jacobi operators for a stack of directions, shape (N, 4, 4)."""
    J = np.einsum("bkla,nk,nl->nab", np.asarray(R, dtype=float), xs, xs, optimize=True)
    return 0.5 * (J + J.transpose(0, 2, 1))


def conf_jacobi_op(R, x) -> np.ndarray:
    return jacobi_op(curvature.weyl(R), x)


def jacobi_spectrum(R, x, use_weyl: bool = False) -> JacobiSpectrum:
    x = np.asarray(x, dtype=float)
    x = x / np.linalg.norm(x)
    T = curvature.weyl(R) if use_weyl else R
    w, _ = sym_eigen(jacobi_op(T, x))
    return JacobiSpectrum(w, x)


@functools.lru_cache(maxsize=None)
def _fixed_directions() -> np.ndarray:
    axes = np.eye(DIM)
    diag = np.array([(1.0,) + s for s in itertools.product((1.0, -1.0), repeat=3)]) / 2.0
    return np.vstack([axes, diag])


def sample_directions(n: int) -> np.ndarray:
    """The 4 axes, 8 diagonals and ``n`` low-discrepancy points on S^3.

    The Kronecker sequence in the unit cube is mapped by the equal-area
    Hopf-type map ``(s, a, b) -> (sqrt(s) e^{ia}, sqrt(1-s) e^{ib})``.
    """
    k = np.arange(1, n + 1)[:, None]
    u = np.mod(0.5 + k * _ALPHA, 1.0)
    r1, r2 = np.sqrt(u[:, 0]), np.sqrt(1.0 - u[:, 0])
    a, b = 2 * np.pi * u[:, 1], 2 * np.pi * u[:, 2]
    pts = np.column_stack([r1 * np.cos(a), r1 * np.sin(a), r2 * np.cos(b), r2 * np.sin(b)])
    return np.vstack([_fixed_directions(), pts])


def osserman_sampled(R, use_weyl: bool = False, n: int = DEFAULT_DIRECTIONS, tol: float = DEFAULT_TOL) -> SampledDecision:
    """Compare sorted Jacobi spectra over a fixed direction set.

    The reference spectrum is the one at e1; the decision is positive iff
    every other spectrum lies within ``tol * (1 + |T|)`` of it in the max
    norm, where ``T`` is R or its Weyl part.
    """
    if n < 8 or not tol > 0:
        raise BadParameters(f"need n >= 8 and tol > 0 (got n={n}, tol={tol})")
    T = curvature.weyl(R) if use_weyl else np.asarray(R, dtype=float)
    dirs = sample_directions(n)
    spectra = sym_eigvals_batch(jacobi_ops(T, dirs))
    dev = np.max(np.abs(spectra - spectra[0]), axis=1)
    worst = int(np.argmax(dev))
    threshold = tol * (1.0 + curvature.norm(T))
    return SampledDecision(
        osserman=bool(dev[worst] <= threshold),
        spectrum=spectra[0],
        deviation=float(dev[worst]),
        threshold=threshold,
        worst_direction=dirs[worst],
        n_directions=len(dirs),
    )


def _monomials(degree: int) -> list[tuple[int, ...]]:
    return [a for a in itertools.product(range(degree + 1), repeat=DIM) if sum(a) == degree]


@functools.lru_cache(maxsize=None)
def _grid() -> np.ndarray:
    return np.array(list(itertools.product(range(-_GRID_RADIUS, _GRID_RADIUS + 1), repeat=DIM)), dtype=float)


@functools.lru_cache(maxsize=None)
def _fit_matrix(degree: int) -> np.ndarray:
    # least-squares solve for homogeneous coefficients from grid values
    pts = _grid()
    V = np.prod(pts[:, None, :] ** np.array(_monomials(degree))[None], axis=-1)
    return np.linalg.pinv(V)


def char_coefficients(J: np.ndarray) -> np.ndarray:
    """Elementary symmetric functions sigma_1..sigma_4 of each matrix in a stack.

    Computed from power traces by Newton's identities, so they are
    polynomial in the entries and need no eigen-solve.
    """
    p = []
    P = J
    for _ in range(DIM):
        p.append(np.trace(P, axis1=-2, axis2=-1))
        P = P @ J
    s = [np.ones_like(p[0])]
    for k in range(1, DIM + 1):
        acc = sum((-1) ** (i - 1) * s[k - i] * p[i - 1] for i in range(1, k + 1))
        s.append(acc / k)
    return np.stack(s[1:], axis=-1)


def osserman_exact(R, use_weyl: bool = False, tol: float = DEFAULT_TOL) -> ExactDecision:
    """Polynomial-identity test for the Osserman property.

    With ``T`` (R or its Weyl part) scaled to ``T / (1 + |T|)``, each
    ``sigma_k(J(x))`` is a homogeneous degree-2k polynomial.  ``T`` is
    Osserman iff ``sigma_k(J(x)) - sigma_k(J(e1)) |x|^{2k}`` vanishes
    identically; its coefficients are recovered by interpolation on the
    integer grid {-3..3}^4 and compared against ``tol``.
    """
    if not tol > 0:
        raise BadParameters("tol must be positive")
    T = curvature.weyl(R) if use_weyl else np.asarray(R, dtype=float)
    T = T / (1.0 + curvature.norm(T))
    pts = _grid()
    sig = char_coefficients(jacobi_ops(T, pts))
    ref = sig[int(np.flatnonzero(np.all(pts == np.eye(DIM)[0], axis=1))[0])]
    r2 = np.sum(pts * pts, axis=1)
    worst = 0.0
    certificate = None
    for k in range(1, DIM + 1):
        residual = sig[:, k - 1] - ref[k - 1] * r2**k
        coeffs = _fit_matrix(2 * k) @ residual
        m = int(np.argmax(np.abs(coeffs)))
        if abs(coeffs[m]) > worst:
            worst = float(abs(coeffs[m]))
            if worst > tol:
                certificate = {"sigma": k, "monomial": list(_monomials(2 * k)[m]), "coefficient": float(coeffs[m])}
    return ExactDecision(osserman=worst <= tol, max_coefficient=worst, tol=tol, certificate=certificate, reference=ref)


def adapted_basis(W, x) -> AdaptedFrame:
    """Oriented frame e1 = x, (e2, e3, e4) eigenvectors of J_W(x) on x-perp.

    The eigenvalues (a, b, c) are ascending.  If the eigenvectors give a
    negatively oriented frame the last one is negated (``flipped``).
    """
    x = np.asarray(x, dtype=float)
    B = extend_to_oriented_onb(x)
    K = B[:, 1:]
    restricted = K.T @ jacobi_op(W, B[:, 0]) @ K
    abc, U = sym_eigen(0.5 * (restricted + restricted.T))
    E = np.column_stack([B[:, 0], K @ U])
    flipped = bool(np.linalg.det(E) < 0)
    if flipped:
        E[:, -1] = -E[:, -1]
    return AdaptedFrame(E, abc, flipped)


def adapted_pattern(a: float, b: float, c: float) -> np.ndarray:
    """Tensor with the component pattern of a conformally Osserman Weyl tensor.

    Nonzero orbits: W1221 = W3443 = -W1234 = a, W1331 = W2442 = -W1342 = b,
    W1441 = W2332 = -W1423 = c.  Satisfies the Bianchi identity iff a+b+c = 0.
    """
    spec = {
        (1, 2, 2, 1): a, (3, 4, 4, 3): a, (1, 2, 3, 4): -a,
        (1, 3, 3, 1): b, (2, 4, 4, 2): b, (1, 3, 4, 2): -b,
        (1, 4, 4, 1): c, (2, 3, 3, 2): c, (1, 4, 2, 3): -c,
    }  # fmt: skip
    return curvature.complete_by_symmetry((tuple(i - 1 for i in idx), v) for idx, v in spec.items())
