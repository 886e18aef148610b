import numpy as np
import pytest

from osserman4d import curvature, duality
from osserman4d.curvature import norm, r0
from osserman4d.errors import OutOfDomain, SingularMetric, UnknownChart
from osserman4d.metriclab import (
    ALPHAS,
    CHARTS,
    SAMPLE_POINTS,
    MetricChart,
    christoffel,
    classify_point,
    conformal,
    conformal_check,
    euclidean,
    fubini_study,
    get_alpha,
    get_chart,
    product_spheres,
    riemann_at,
    riemann_sample,
    sphere,
)
from osserman4d.quaternion import r_phi, standard_structure

P = [0.1, 0.2, 0.3, 0.4]


def test_euclidean_christoffel_zero():
    assert np.max(np.abs(christoffel(euclidean(), P))) <= 1e-12


def test_conformal_christoffel_closed_form():
    # g = e^{2 x1} delta: Gamma^i_jk = d_j f delta_ik + d_k f delta_ij - d_i f delta_jk with df = (1,0,0,0)
    G = christoffel(conformal(euclidean(), lambda p: 2 * p[0]), np.zeros(4), 1e-3)
    df = np.array([1.0, 0, 0, 0])
    d = np.eye(4)
    expected = np.einsum("j,ik->ijk", df, d) + np.einsum("k,ij->ijk", df, d) - np.einsum("i,jk->ijk", df, d)
    np.testing.assert_allclose(G, expected, atol=1e-6)
    assert G[0, 0, 0] == pytest.approx(1, abs=1e-6)
    assert G[0, 1, 1] == pytest.approx(-1, abs=1e-6)
    assert G[1, 0, 1] == pytest.approx(1, abs=1e-6)


def test_christoffel_symmetric():
    G = christoffel(fubini_study(), P)
    np.testing.assert_array_equal(G, G.transpose(0, 2, 1))


def test_sphere_curvature_is_r0():
    assert norm(riemann_at(sphere(), P) - r0()) <= 1e-5


def test_euclidean_curvature_zero():
    assert norm(riemann_at(euclidean(), P)) <= 1e-10


def test_fubini_study_origin_closed_form():
    # holomorphic curvature 4: R = R0 + R_J with J the standard complex structure
    expected = r0() + r_phi(standard_structure().phi1)
    assert norm(riemann_at(fubini_study(), np.zeros(4)) - expected) <= 1e-4


def test_product_spheres_closed_form():
    # orthonormal frame: R = R_{S^2} on (e1, e2) plus R_{S^2} on (e3, e4)
    R = riemann_at(product_spheres(), [1.0, 0.5, 1.2, -0.3])
    expected = np.zeros((4,) * 4)
    for a, b in ((0, 1), (2, 3)):
        expected[a, b, b, a] = expected[b, a, a, b] = 1
        expected[a, b, a, b] = expected[b, a, b, a] = -1
    assert norm(R - expected) <= 1e-5


def test_sphere_convergence_order():
    e1 = norm(riemann_at(sphere(), P, 1e-2) - r0())
    e2 = norm(riemann_at(sphere(), P, 5e-3) - r0())
    assert 3.2 <= e1 / e2 <= 4.8


@pytest.mark.parametrize("name", sorted(CHARTS))
def test_defect_is_second_order(name):
    ratios = []
    for p in SAMPLE_POINTS[name]:
        d1 = riemann_sample(get_chart(name), p, 1e-2).defect
        d2 = riemann_sample(get_chart(name), p, 5e-3).defect
        if d1 > 1e-10:  # below that the defect is round-off, not truncation
            ratios.append(d1 / d2)
    assert all(3 <= r <= 5 for r in ratios)


def test_output_passes_validation():
    for name in CHARTS:
        R = riemann_at(get_chart(name), SAMPLE_POINTS[name][1])
        curvature.validate(R, tol=1e-6, bianchi_tol=1e-6, relative=True)


@pytest.mark.parametrize("name", sorted(CHARTS))
def test_theorem_biconditional_on_charts(name):
    for p in SAMPLE_POINTS[name]:
        rep = classify_point(get_chart(name), p)
        assert rep.consistent
        assert rep.conformally_osserman == rep.conformally_osserman_exact


def test_expected_labels():
    assert classify_point(sphere(), P).duality.cls == duality.CONFORMALLY_FLAT
    assert classify_point(fubini_study(), P).duality.cls in (duality.SELF_DUAL, duality.ANTI_SELF_DUAL)
    rep = classify_point(product_spheres(), [1.0, 0.5, 1.2, -0.3])
    assert rep.duality.cls == duality.NEITHER and not rep.conformally_osserman
    assert classify_point(get_chart("perturbed"), P).duality.cls == duality.NEITHER


def test_conformal_zero_alpha_identical():
    comp = conformal_check(fubini_study(), get_alpha("zero"), P)
    np.testing.assert_array_equal(comp.base_spectra, comp.rescaled_spectra)
    assert comp.ok


def test_conformal_flat_stays_flat():
    comp = conformal_check(euclidean(), get_alpha("linear"), np.zeros(4))
    assert comp.base.duality.cls == comp.rescaled.duality.cls == duality.CONFORMALLY_FLAT


def test_conformal_fubini_study_sin():
    comp = conformal_check(fubini_study(), get_alpha("sin"), P)
    assert comp.labels_agree and comp.rescaled.duality.cls == duality.SELF_DUAL
    assert comp.spectral_error <= 1e-4


def test_out_of_domain():
    with pytest.raises(OutOfDomain):
        riemann_at(product_spheres(), [0.2, 0, 1, 0])
    with pytest.raises(OutOfDomain):
        christoffel(sphere(), [3.0, 0, 0, 0])
    with pytest.raises(OutOfDomain):
        riemann_at(sphere(), P, 0.0)


def test_singular_metric():
    chart = MetricChart("degenerate", lambda p: np.diag([1.0, 1.0, 1.0, 0.0]), -np.ones(4), np.ones(4))
    with pytest.raises(SingularMetric):
        riemann_at(chart, np.zeros(4))


def test_unknown_names():
    with pytest.raises(UnknownChart):
        get_chart("torus")
    with pytest.raises(UnknownChart):
        get_alpha("cubic")
    assert set(ALPHAS) >= {"zero", "linear", "sin", "quadratic"}


def test_charts_positive_definite():
    for name in CHARTS:
        chart = get_chart(name)
        for p in SAMPLE_POINTS[name]:
            g = chart.metric(p)
            np.testing.assert_allclose(g, g.T, atol=1e-12)
            np.linalg.cholesky(g)
