"""Pointwise curvature of coordinate metrics by central finite differences.

Curvature is returned in the orthonormal frame given by the inverse
transpose of the Cholesky factor of g(p), so the algebraic routines can use
the Euclidean inner product.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import curvature, duality, osserman
from .errors import OutOfDomain, SingularMetric, UnknownChart
from .lintensor import DIM, sym_eigvals_batch

DEFAULT_STEP = 1e-3
FD_TOL = 1e-4

MetricFn = Callable[[np.ndarray], np.ndarray]
ScalarFn = Callable[[np.ndarray], float]


@dataclass(frozen=True)
class MetricChart:
    name: str
    evaluator: MetricFn
    lower: np.ndarray
    upper: np.ndarray

    def metric(self, p) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        if np.any(p < self.lower) or np.any(p > self.upper):
            raise OutOfDomain(f"{p.tolist()} lies outside the {self.name} chart")
        return np.asarray(self.evaluator(p), dtype=float)

    def require_margin(self, p, margin: float) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        if p.shape != (DIM,):
            raise OutOfDomain(f"expected 4 coordinates, got {p.shape}")
        if np.any(p - margin < self.lower) or np.any(p + margin > self.upper):
            raise OutOfDomain(f"{p.tolist()} is within {margin:g} of the {self.name} chart boundary")
        return p


@dataclass(frozen=True)
class CurvatureSample:
    curvature: np.ndarray
    defect: float
    frame: np.ndarray
    metric: np.ndarray


@dataclass(frozen=True)
class PointReport:
    point: np.ndarray
    curvature: np.ndarray
    duality: duality.DualityReport
    osserman: bool
    conformally_osserman: bool
    step: float
    defect: float
    conformally_osserman_exact: bool = False

    @property
    def consistent(self) -> bool:
        """Whether the conformal Osserman decision matches the half-flat label."""
        return self.conformally_osserman == (self.duality.cls in duality.HALF_FLAT)

    def as_dict(self) -> dict:
        return {
            "point": [float(v) for v in self.point],
            "step": self.step,
            "symmetrization_defect": self.defect,
            "curvature_norm": curvature.norm(self.curvature),
            "weyl_norm": curvature.norm(curvature.weyl(self.curvature)),
            "duality": self.duality.as_dict(),
            "osserman": self.osserman,
            "conformally_osserman": self.conformally_osserman,
            "conformally_osserman_exact": self.conformally_osserman_exact,
            "theorem_consistent": self.consistent,
        }


@dataclass(frozen=True)
class ConformalComparison:
    alpha_at_point: float
    base: PointReport
    rescaled: PointReport
    base_spectra: np.ndarray
    rescaled_spectra: np.ndarray
    spectral_error: float
    labels_agree: bool
    tol: float = FD_TOL
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.labels_agree and self.spectral_error <= self.tol

    def as_dict(self) -> dict:
        return {
            "alpha": self.alpha_at_point,
            "base": self.base.as_dict(),
            "rescaled": self.rescaled.as_dict(),
            "spectral_error": self.spectral_error,
            "labels_agree": self.labels_agree,
            "ok": self.ok,
        }


# ---------------------------------------------------------------- charts


def _box(lo, hi) -> tuple[np.ndarray, np.ndarray]:
    return np.asarray(lo, dtype=float), np.asarray(hi, dtype=float)


def euclidean() -> MetricChart:
    return MetricChart("euclidean", lambda p: np.eye(DIM), *_box([-10] * 4, [10] * 4))


def sphere() -> MetricChart:
    """Unit round S^4 in stereographic coordinates, g = 4 dx^2 / (1 + |x|^2)^2."""
    return MetricChart("sphere", lambda p: 4.0 / (1.0 + p @ p) ** 2 * np.eye(DIM), *_box([-3] * 4, [3] * 4))


def hyperbolic() -> MetricChart:
    """Upper half-space model dx^2 / x4^2 on a slab with x4 >= 0.3."""
    return MetricChart("hyperbolic", lambda p: np.eye(DIM) / p[3] ** 2, *_box([-3, -3, -3, 0.3], [3, 3, 3, 5]))


def _fubini_study(p: np.ndarray) -> np.ndarray:
    # z = (x1 + i x2, x3 + i x4); g = Re[(1+|z|^2) <u,v> - conj(<z,u>) <z,v>] / (1+|z|^2)^2
    z = np.array([p[0] + 1j * p[1], p[2] + 1j * p[3]])
    s = 1.0 + np.vdot(z, z).real
    basis = np.array([[1, 0], [1j, 0], [0, 1], [0, 1j]])
    zu = basis @ z.conj()
    H = s * (basis.conj() @ basis.T) - np.outer(zu.conj(), zu)
    return H.real / s**2


def fubini_study() -> MetricChart:
    """Affine patch of the complex projective plane (holomorphic curvature 4)."""
    return MetricChart("fubini-study", _fubini_study, *_box([-2] * 4, [2] * 4))


def product_spheres() -> MetricChart:
    """S^2(1) x S^2(1) in polar/azimuth coordinates (t1, f1, t2, f2), away from the poles."""
    lo = [0.2, -np.pi, 0.2, -np.pi]
    hi = [np.pi - 0.2, np.pi, np.pi - 0.2, np.pi]
    return MetricChart(
        "product-spheres",
        lambda p: np.diag([1.0, np.sin(p[0]) ** 2, 1.0, np.sin(p[2]) ** 2]),
        *_box(lo, hi),
    )


_PERTURB_B = np.array(
    [[1.0, 0.3, -0.5, 0.2], [0.1, -0.7, 0.4, 0.9], [-0.6, 0.2, 0.8, -0.3], [0.5, 0.4, 0.1, -1.1]]
)
_PERTURB_D = np.array([0.7, -0.4, 1.3, 0.2])


def perturbed(eps: float = 0.2) -> MetricChart:
    """Generic metric delta + eps ((Bx)(Bx)^T + diag(D x^2)) used as a non-half-flat source."""

    def g(p):
        v = _PERTURB_B @ p
        return np.eye(DIM) + eps * (np.outer(v, v) + np.diag(np.abs(_PERTURB_D) * p * p + 0.3 * _PERTURB_D * p[::-1]))

    return MetricChart("perturbed", g, *_box([-1] * 4, [1] * 4))


def conformal(chart: MetricChart, alpha: ScalarFn, label: str = "alpha") -> MetricChart:
    """The chart with metric e^alpha g."""
    return MetricChart(
        f"{chart.name}*exp({label})",
        lambda p: np.exp(alpha(p)) * chart.evaluator(p),
        chart.lower,
        chart.upper,
    )


CHARTS: dict[str, Callable[[], MetricChart]] = {
    "euclidean": euclidean,
    "sphere": sphere,
    "hyperbolic": hyperbolic,
    "fubini-study": fubini_study,
    "product-spheres": product_spheres,
    "perturbed": perturbed,
}

ALPHAS: dict[str, ScalarFn] = {
    "zero": lambda p: 0.0,
    "linear": lambda p: 2.0 * p[0],
    "sin": lambda p: float(np.sin(p[0] + p[1])),
    "quadratic": lambda p: 0.3 * float(p @ p) - 0.2 * p[2],
}

#: interior sample points per chart, used by the test suites and the CLI defaults
SAMPLE_POINTS: dict[str, list[list[float]]] = {
    "euclidean": [[0, 0, 0, 0], [0.1, 0.2, 0.3, 0.4], [1, -1, 0.5, 2], [-2, 0.3, 0.7, 0], [3, 3, -3, 1]],
    "sphere": [[0, 0, 0, 0], [0.1, 0.2, 0.3, 0.4], [0.5, -0.3, 0.2, 0.1], [-0.8, 0.6, 0.4, -0.2], [1.2, 0.1, -0.5, 0.3]],
    "hyperbolic": [[0, 0, 0, 1], [0.1, 0.2, 0.3, 0.8], [1, -1, 0.5, 2], [-0.5, 0.3, 0.7, 0.6], [0.2, 0.2, -0.2, 1.5]],
    "fubini-study": [[0, 0, 0, 0], [0.1, 0.2, 0.3, 0.4], [0.5, -0.3, 0.2, 0.1], [-0.8, 0.6, 0.4, -0.2], [1.0, 0.1, -0.5, 0.7]],
    "product-spheres": [[1.0, 0.5, 1.2, -0.3], [0.7, 0.0, 2.0, 1.0], [1.5, -2.0, 0.9, 0.4], [2.2, 1.0, 1.6, -1.5], [1.2, 0.3, 0.6, 2.5]],
    "perturbed": [[0, 0, 0, 0], [0.1, 0.2, 0.3, 0.4], [0.5, -0.3, 0.2, 0.1], [-0.4, 0.3, 0.2, -0.2], [0.3, 0.1, -0.5, 0.3]],
}


def get_chart(name: str) -> MetricChart:
    try:
        return CHARTS[name]()
    except KeyError:
        raise UnknownChart(f"unknown chart {name!r}; choose from {sorted(CHARTS)}") from None


def get_alpha(name: str) -> ScalarFn:
    try:
        return ALPHAS[name]
    except KeyError:
        raise UnknownChart(f"unknown conformal factor {name!r}; choose from {sorted(ALPHAS)}") from None


# ---------------------------------------------------------- differencing


def _metric_checked(chart: MetricChart, p: np.ndarray) -> np.ndarray:
    g = chart.metric(p)
    if np.max(np.abs(g - g.T)) > 1e-12 * (1.0 + np.max(np.abs(g))):
        raise SingularMetric(f"{chart.name} metric is not symmetric at {p.tolist()}")
    return 0.5 * (g + g.T)


def _christoffel(chart: MetricChart, p: np.ndarray, h: float) -> np.ndarray:
    g = _metric_checked(chart, p)
    try:
        ginv = np.linalg.inv(g)
    except np.linalg.LinAlgError as exc:
        raise SingularMetric(f"{chart.name} metric is singular at {p.tolist()}") from exc
    dg = np.empty((DIM, DIM, DIM))  # dg[a] = d_a g
    for a in range(DIM):
        step = np.zeros(DIM)
        step[a] = h
        dg[a] = (_metric_checked(chart, p + step) - _metric_checked(chart, p - step)) / (2.0 * h)
    # Gamma^i_jk = 1/2 g^il (d_j g_lk + d_k g_lj - d_l g_jk)
    return 0.5 * (
        np.einsum("il,jlk->ijk", ginv, dg) + np.einsum("il,klj->ijk", ginv, dg) - np.einsum("il,ljk->ijk", ginv, dg)
    )


def christoffel(chart: MetricChart, p, h: float = DEFAULT_STEP) -> np.ndarray:
    """Christoffel symbols ``G[i, j, k] = Gamma^i_jk`` by central differences of step h."""
    if not h > 0:
        raise OutOfDomain("step must be positive")
    p = chart.require_margin(p, 2 * h)
    return _christoffel(chart, p, h)


def coordinate_riemann(chart: MetricChart, p, h: float = DEFAULT_STEP) -> np.ndarray:
    """Lowered coordinate components ``R(d_a, d_b, d_c, d_d)``, not symmetrized."""
    if not h > 0:
        raise OutOfDomain("step must be positive")
    p = chart.require_margin(p, 3 * h)
    G = _christoffel(chart, p, h)
    dG = np.empty((DIM,) * 4)  # dG[k] = d_k Gamma
    for k in range(DIM):
        step = np.zeros(DIM)
        step[k] = h
        dG[k] = (_christoffel(chart, p + step, h) - _christoffel(chart, p - step, h)) / (2.0 * h)
    # R^i_jkl = d_k G^i_lj - d_l G^i_kj + G^i_km G^m_lj - G^i_lm G^m_kj  (= R(d_k, d_l) d_j)
    up = (
        np.einsum("kilj->ijkl", dG)
        - np.einsum("likj->ijkl", dG)
        + np.einsum("ikm,mlj->ijkl", G, G)
        - np.einsum("ilm,mkj->ijkl", G, G)
    )
    g = _metric_checked(chart, p)
    return np.einsum("di,icab->abcd", g, up)


def orthonormal_frame(g) -> np.ndarray:
    """Columns form a g-orthonormal, positively oriented frame: L^{-T} for g = L L^T."""
    try:
        L = np.linalg.cholesky(g)
    except np.linalg.LinAlgError as exc:
        raise SingularMetric("metric is not positive definite") from exc
    return np.linalg.inv(L).T


def riemann_sample(chart: MetricChart, p, h: float = DEFAULT_STEP) -> CurvatureSample:
    low = coordinate_riemann(chart, p, h)
    g = _metric_checked(chart, np.asarray(p, dtype=float))
    E = orthonormal_frame(g)
    framed = np.einsum("ia,jb,kc,ld,ijkl->abcd", E, E, E, E, low, optimize=True)
    sym = curvature.project_curvature(framed)
    return CurvatureSample(sym, curvature.norm(framed - sym), E, g)


def riemann_at(chart: MetricChart, p, h: float = DEFAULT_STEP) -> np.ndarray:
    """Curvature tensor at p in the Cholesky orthonormal frame, projected onto curvature symmetries."""
    return riemann_sample(chart, p, h).curvature


def classify_point(chart: MetricChart, p, h: float = DEFAULT_STEP, tol: float = FD_TOL) -> PointReport:
    sample = riemann_sample(chart, p, h)
    R = sample.curvature
    return PointReport(
        point=np.asarray(p, dtype=float),
        curvature=R,
        duality=duality.classify(R, tol),
        osserman=osserman.osserman_sampled(R, use_weyl=False, tol=tol).osserman,
        conformally_osserman=osserman.osserman_sampled(R, use_weyl=True, tol=tol).osserman,
        step=h,
        defect=sample.defect,
        conformally_osserman_exact=osserman.osserman_exact(R, use_weyl=True, tol=tol).osserman,
    )


def weyl_spectra(R, directions=None) -> np.ndarray:
    """Sorted conformal Jacobi spectra of R at the given frame directions (default: axes and diagonals)."""
    dirs = osserman.sample_directions(0) if directions is None else np.asarray(directions, dtype=float)
    return sym_eigvals_batch(osserman.jacobi_ops(curvature.weyl(R), dirs))


def conformal_check(chart: MetricChart, alpha: ScalarFn, p, h: float = DEFAULT_STEP, tol: float = FD_TOL,
                    label: str = "alpha") -> ConformalComparison:
    """Compare the conformal Jacobi spectra of g and e^alpha g at p.

    Each metric uses its own orthonormal frame.  The rescaled spectra should
    equal ``exp(-alpha(p))`` times the original ones; the error reported is
    ``max |s_h - exp(-alpha) s_g| / (1 + max |s_g|)``.
    """
    p = np.asarray(p, dtype=float)
    base = classify_point(chart, p, h, tol)
    rescaled = classify_point(conformal(chart, alpha, label), p, h, tol)
    a = float(alpha(p))
    s_g = weyl_spectra(base.curvature)
    s_h = weyl_spectra(rescaled.curvature)
    err = float(np.max(np.abs(s_h - np.exp(-a) * s_g)) / (1.0 + np.max(np.abs(s_g))))
    return ConformalComparison(
        alpha_at_point=a,
        base=base,
        rescaled=rescaled,
        base_spectra=s_g,
        rescaled_spectra=s_h,
        spectral_error=err,
        labels_agree=base.duality.cls == rescaled.duality.cls,
        tol=tol,
    )
