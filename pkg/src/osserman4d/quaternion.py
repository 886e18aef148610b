"""Quaternionic curvature tensors R_Phi, synthesis and constructive recovery.

A Weyl tensor that is self-dual (or anti-self-dual) can be written as
``sum_i lambda_i R_{Phi_i}`` with ``sum_i lambda_i = 0`` for a unitary
quaternion structure ``(Phi_1, Phi_2, Phi_3 = Phi_1 Phi_2)``.  With this
normalisation of ``R_Phi`` (``R_Phi(e1,e2,e2,e1) = 3``) the coefficients
are one third of the conformal Jacobi eigenvalues.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import curvature, duality
from .errors import NotAComplexStructure, NotHalfFlat, NotOrthonormal
from .lintensor import DIM, PAIRS, hodge_star, is_orthonormal
from .osserman import adapted_basis

_ID = np.eye(DIM)
_FLIP = np.diag([1.0, 1.0, 1.0, -1.0])


def kahler_form(phi) -> np.ndarray:
    """2-form omega(x, y) = <Phi x, y> as a 6-vector."""
    omega = np.asarray(phi, dtype=float).T
    return np.array([omega[i, j] for i, j in PAIRS])


@dataclass(frozen=True)
class QuaternionStructure:
    phi1: np.ndarray
    phi2: np.ndarray
    phi3: np.ndarray

    @property
    def phis(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return (self.phi1, self.phi2, self.phi3)

    def violations(self, tol: float = 1e-10) -> dict[str, float]:
        """Size of each broken structure identity; empty when the triple is valid."""
        found: dict[str, float] = {}

        def note(name, value, limit):
            if value > limit:
                found[name] = float(value)

        for n, phi in enumerate(self.phis, 1):
            note(f"skew{n}", np.max(np.abs(phi + phi.T)), 1e-12)
        for a in range(3):
            for b in range(a, 3):
                pa, pb = self.phis[a], self.phis[b]
                target = -2.0 * _ID if a == b else 0.0 * _ID
                note(f"anticommute{a + 1}{b + 1}", np.max(np.abs(pa @ pb + pb @ pa - target)), tol)
        note("product", np.max(np.abs(self.phi1 @ self.phi2 - self.phi3)), tol)
        sides = []
        for phi in self.phis:
            w = kahler_form(phi)
            sides.append((np.max(np.abs(hodge_star(w) - w)), np.max(np.abs(hodge_star(w) + w))))
        note("same_hodge_side", min(max(s[0] for s in sides), max(s[1] for s in sides)), tol)
        return found

    def duality_side(self) -> int:
        """+1 if the Kahler forms are self-dual, -1 if anti-self-dual."""
        w = kahler_form(self.phi1)
        return 1 if np.linalg.norm(hodge_star(w) - w) <= np.linalg.norm(hodge_star(w) + w) else -1

    def conjugate(self, O) -> "QuaternionStructure":
        O = np.asarray(O, dtype=float)
        return QuaternionStructure(*(O @ p @ O.T for p in self.phis))

    def as_dict(self) -> dict:
        return {f"phi{n}": np.asarray(p).tolist() for n, p in enumerate(self.phis, 1)}


@dataclass(frozen=True)
class QuaternionDecomposition:
    structure: QuaternionStructure
    lambdas: np.ndarray
    residual: float
    orientation_flipped: bool

    def as_dict(self) -> dict:
        return {
            "structure": self.structure.as_dict(),
            "lambdas": [float(v) for v in self.lambdas],
            "residual": self.residual,
            "orientation_flipped": self.orientation_flipped,
        }


def r_phi(phi) -> np.ndarray:
    """R_Phi(x,y)z = <Phi y,z> Phi x - <Phi x,z> Phi y - 2 <Phi x,y> Phi z.

    Components: ``w_jk w_il - w_ik w_jl - 2 w_ij w_kl`` with ``w_ij = <Phi e_i, e_j>``.
    Raises NotAComplexStructure unless Phi is skew with Phi^2 = -1.
    """
    phi = np.asarray(phi, dtype=float)
    if phi.shape != (DIM, DIM) or np.max(np.abs(phi + phi.T)) > 1e-12:
        raise NotAComplexStructure("Phi must be a skew-symmetric 4x4 matrix")
    err = np.max(np.abs(phi @ phi + _ID))
    if err > 1e-10:
        raise NotAComplexStructure(f"Phi^2 + id has size {err:.3e}")
    w = phi.T
    return np.einsum("jk,il->ijkl", w, w) - np.einsum("ik,jl->ijkl", w, w) - 2.0 * np.einsum("ij,kl->ijkl", w, w)


def _map_matrix(images: dict[int, tuple[int, int]], basis: np.ndarray) -> np.ndarray:
    # images: source index -> (sign, target index), all 0-based
    M = np.zeros((DIM, DIM))
    for src, (sign, dst) in images.items():
        M[dst, src] = sign
    return basis @ M @ basis.T


def standard_structure(basis=None, *, flipped_phi2: bool = False) -> QuaternionStructure:
    """Quaternion structure attached to an orthonormal frame (columns of ``basis``).

    Phi1: e1->e2, e2->-e1, e3->e4, e4->-e3.
    Phi2: e1->e3, e2->-e4, e3->-e1, e4->e2.
    Phi3 = Phi1 Phi2.

    ``flipped_phi2=True`` swaps in Phi2: e2->e4, e4->-e2 instead; that table
    breaks anticommutation and exists only as a negative control.
    """
    basis = np.eye(DIM) if basis is None else np.asarray(basis, dtype=float)
    if not is_orthonormal(basis):
        raise NotOrthonormal("basis must be orthonormal")
    phi1 = _map_matrix({0: (1, 1), 1: (-1, 0), 2: (1, 3), 3: (-1, 2)}, basis)
    if flipped_phi2:
        phi2 = _map_matrix({0: (1, 2), 2: (-1, 0), 1: (1, 3), 3: (-1, 1)}, basis)
    else:
        phi2 = _map_matrix({0: (1, 2), 2: (-1, 0), 1: (-1, 3), 3: (1, 1)}, basis)
    return QuaternionStructure(phi1, phi2, phi1 @ phi2)


def synthesize(structure: QuaternionStructure, lambdas) -> np.ndarray:
    lambdas = np.asarray(lambdas, dtype=float)
    return sum(lam * r_phi(phi) for lam, phi in zip(lambdas, structure.phis))


def recover(W, tol: float = duality.DEFAULT_TOL, *, flipped_phi2: bool = False) -> QuaternionDecomposition:
    """Write the Weyl part of W as ``sum lambda_i R_{Phi_i}``.

    Builds the adapted frame at e1, so that J_W(e1) has eigenvalues
    (a, b, c) on e2, e3, e4, takes the standard structure on that frame,
    and returns lambda = (a, b, c) / 3.  Anti-self-dual input is conjugated
    by e4 -> -e4, recovered, and conjugated back.

    Raises NotHalfFlat if the Weyl part is neither self-dual nor anti-self-dual.
    """
    W = curvature.weyl(W)
    report = duality.classify(W, tol)
    if report.cls == duality.NEITHER:
        raise NotHalfFlat(f"Weyl tensor has |W+| = {report.norm_plus:.3e} and |W-| = {report.norm_minus:.3e}")
    flipped = report.cls == duality.ANTI_SELF_DUAL
    work = curvature.transform(W, _FLIP) if flipped else W
    frame = adapted_basis(work, _ID[0])
    structure = standard_structure(frame.basis, flipped_phi2=flipped_phi2)
    lambdas = frame.abc / 3.0
    if flipped:
        structure = structure.conjugate(_FLIP)
    residual = curvature.norm(W - synthesize(structure, lambdas))
    return QuaternionDecomposition(structure, lambdas, residual, flipped)
