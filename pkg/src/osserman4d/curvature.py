"""Algebraic curvature tensors on R^4.

A tensor is a dense ``(4, 4, 4, 4)`` float array with ``T[i, j, k, l] =
R(e_i, e_j, e_k, e_l) = <R(e_i, e_j) e_k, e_l>`` (0-based indices).

Conventions:

* Ricci: ``rho(y, z) = sum_i R(e_i, y, z, e_i)``, so the unit sphere
  tensor ``r0()`` has ``rho = 3 g`` and scalar curvature 12.
* Weyl: ``W = R - L(rho)/(m-2) + tau R0/((m-1)(m-2))`` with m = 4.  This
  is the sign choice that kills every constant-curvature tensor.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Mapping

import numpy as np

from .errors import ParseError, SymmetryViolation
from .lintensor import DIM, check_symmetric

SHAPE = (DIM,) * 4
_M = DIM

# (permutation of (i,j,k,l), sign) generating the symmetry group of order 8
_SYM_GROUP = (
    ((0, 1, 2, 3), 1),
    ((1, 0, 2, 3), -1),
    ((0, 1, 3, 2), -1),
    ((1, 0, 3, 2), 1),
    ((2, 3, 0, 1), 1),
    ((3, 2, 0, 1), -1),
    ((2, 3, 1, 0), -1),
    ((3, 2, 1, 0), 1),
)


def _perm_sign(perm) -> int:
    inv = sum(perm[a] > perm[b] for a in range(4) for b in range(a + 1, 4))
    return -1 if inv % 2 else 1


_ALL_PERMS = tuple((p, _perm_sign(p)) for p in itertools.permutations(range(4)))


def norm(T) -> float:
    """Frobenius norm over all components."""
    return float(np.sqrt(np.sum(np.asarray(T, dtype=float) ** 2)))


def symmetry_defects(T) -> dict[str, float]:
    T = np.asarray(T, dtype=float)
    bianchi = T + np.einsum("jkil->ijkl", T) + np.einsum("kijl->ijkl", T)
    return {
        "antisymmetry": float(np.max(np.abs(T + T.transpose(1, 0, 2, 3)))),
        "pair_symmetry": float(np.max(np.abs(T - T.transpose(2, 3, 0, 1)))),
        "bianchi": float(np.max(np.abs(bianchi))),
    }


def validate(T, tol: float = 1e-12, bianchi_tol: float = 1e-11, relative: bool = False) -> np.ndarray:
    """Return ``T`` as a float array if it is an algebraic curvature tensor.

    Raises SymmetryViolation naming the worst broken identity otherwise.
    With ``relative=True`` both tolerances are scaled by ``1 + |T|``.
    """
    T = np.asarray(T, dtype=float)
    if T.shape != SHAPE:
        raise SymmetryViolation("shape", float("nan"))
    if not np.all(np.isfinite(T)):
        raise SymmetryViolation("finiteness", float("inf"))
    scale = 1.0 + norm(T) if relative else 1.0
    limits = {"antisymmetry": tol, "pair_symmetry": tol, "bianchi": bianchi_tol}
    defects = symmetry_defects(T)
    worst = max(defects, key=lambda k: defects[k] / limits[k])
    if defects[worst] > limits[worst] * scale:
        raise SymmetryViolation(worst, defects[worst])
    return T


def project_curvature(T) -> np.ndarray:
    """Orthogonal projection of an arbitrary rank-4 array onto curvature tensors.

    Averages over the antisymmetry/pair-swap group, then removes the totally
    antisymmetric part, which is exactly the Bianchi-violating component.
    """
    T = np.asarray(T, dtype=float)
    S = sum(sign * T.transpose(perm) for perm, sign in _SYM_GROUP) / len(_SYM_GROUP)
    alt = sum(sign * S.transpose(perm) for perm, sign in _ALL_PERMS) / len(_ALL_PERMS)
    return S - alt


def ricci(R) -> np.ndarray:
    return np.einsum("ijki->jk", np.asarray(R, dtype=float))


def scalar(R) -> float:
    return float(np.trace(ricci(R)))


def r0() -> np.ndarray:
    """Unit-sphere tensor R0(x,y)z = g(y,z)x - g(x,z)y."""
    d = np.eye(DIM)
    return np.einsum("jk,il->ijkl", d, d) - np.einsum("ik,jl->ijkl", d, d)


def kulkarni(h, k=None) -> np.ndarray:
    """Kulkarni-Nomizu product of symmetric h with k (default: the metric).

    ``(h.g)_ijkl = h_jk g_il - h_ik g_jl + g_jk h_il - g_ik h_jl``.
    """
    h = check_symmetric(h)
    k = np.eye(DIM) if k is None else check_symmetric(k)
    return (
        np.einsum("jk,il->ijkl", h, k)
        - np.einsum("ik,jl->ijkl", h, k)
        + np.einsum("jk,il->ijkl", k, h)
        - np.einsum("ik,jl->ijkl", k, h)
    )


def ell(rho) -> np.ndarray:
    """L(x,y)z = g(rho y,z)x - g(rho x,z)y + g(y,z)rho x - g(x,z)rho y."""
    rho = check_symmetric(rho)
    d = np.eye(DIM)
    return (
        np.einsum("jk,il->ijkl", rho, d)
        - np.einsum("ik,jl->ijkl", rho, d)
        + np.einsum("jk,il->ijkl", d, rho)
        - np.einsum("ik,jl->ijkl", d, rho)
    )


def weyl(R) -> np.ndarray:
    """Weyl (totally trace-free) part of a curvature tensor in dimension 4."""
    R = np.asarray(R, dtype=float)
    rho = ricci(R)
    rho = 0.5 * (rho + rho.T)
    tau = float(np.trace(rho))
    return R - ell(rho) / (_M - 2) + tau * r0() / ((_M - 1) * (_M - 2))


def random_act(seed, scale: float = 1.0) -> np.ndarray:
    """Deterministic pseudo-random algebraic curvature tensor."""
    rng = np.random.default_rng(seed)
    return project_curvature(rng.uniform(-scale, scale, SHAPE))


def transform(T, O) -> np.ndarray:
    """Push a tensor forward by the orthogonal map O: T'(x,..) = T(O^t x, ..)."""
    O = np.asarray(O, dtype=float)
    return np.einsum("ai,bj,ck,dl,ijkl->abcd", O, O, O, O, np.asarray(T, dtype=float), optimize=True)


def complete_by_symmetry(entries: Iterable[tuple[tuple[int, int, int, int], float]], tol: float = 1e-12) -> np.ndarray:
    """Fill a tensor from (0-based index, value) pairs using the 8-element symmetry group.

    Raises ParseError when two entries in the same orbit disagree by more
    than ``tol``.  The first Bianchi identity is *not* imposed.
    """
    T = np.zeros(SHAPE)
    seen = np.zeros(SHAPE, dtype=bool)
    for idx, value in entries:
        value = float(value)
        for perm, sign in _SYM_GROUP:
            target = tuple(idx[p] for p in perm)
            v = sign * value
            if len(set(target[:2])) < 2 or len(set(target[2:])) < 2:
                if abs(value) > tol:
                    raise ParseError(f"component {_fmt(idx)} = {value} must vanish by antisymmetry")
                continue
            if seen[target] and abs(T[target] - v) > tol:
                raise ParseError(
                    f"component {_fmt(idx)} = {value} conflicts with {_fmt(target)} = {T[target]} after symmetry completion"
                )
            T[target] = v
            seen[target] = True
    return T


def _fmt(idx) -> str:
    return "R" + "".join(str(i + 1) for i in idx)


def nonzero_components(T, tol: float = 0.0) -> list[dict]:
    """One record per symmetry orbit with a nonzero entry, 1-based indices."""
    T = np.asarray(T, dtype=float)
    pairs = list(itertools.combinations(range(DIM), 2))
    out: list[dict] = []
    for a, (i, j) in enumerate(pairs):
        for k, l in pairs[a:]:
            value = float(T[i, j, k, l])
            if abs(value) > tol:
                out.append({"i": i + 1, "j": j + 1, "k": k + 1, "l": l + 1, "value": value})
    return out


def from_records(records: Iterable[Mapping]) -> np.ndarray:
    entries = []
    for n, rec in enumerate(records):
        try:
            idx = tuple(int(rec[key]) - 1 for key in "ijkl")
            value = float(rec["value"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"components[{n}]: expected fields i,j,k,l,value ({exc})") from exc
        if not all(0 <= i < DIM for i in idx):
            raise ParseError(f"components[{n}]: indices must lie in 1..4")
        if not np.isfinite(value):
            raise ParseError(f"components[{n}]: value must be finite")
        entries.append((idx, value))
    return complete_by_symmetry(entries)
