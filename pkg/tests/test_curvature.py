import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from osserman4d import curvature
from osserman4d.curvature import ell, kulkarni, norm, r0, random_act, ricci, scalar, validate, weyl
from osserman4d.errors import NonSymmetric, ParseError, SymmetryViolation
from osserman4d.osserman import jacobi_op
from osserman4d.quaternion import r_phi, standard_structure

IDX = list(itertools.product(range(4), repeat=4))


def brute_r0():
    # g(y,z)g(x,w) - g(x,z)g(y,w) on basis vectors
    e = np.eye(4)
    T = np.zeros((4,) * 4)
    for i, j, k, l in IDX:
        T[i, j, k, l] = (e[j] @ e[k]) * (e[i] @ e[l]) - (e[i] @ e[k]) * (e[j] @ e[l])
    return T


def brute_ricci(T):
    rho = np.zeros((4, 4))
    for y, z, i in itertools.product(range(4), repeat=3):
        rho[y, z] += T[i, y, z, i]
    return rho


def sym(rng, n=4):
    A = rng.standard_normal((n, n))
    return A + A.T


def test_zero_tensor_valid():
    validate(np.zeros((4,) * 4))


def test_r0_components():
    T = r0()
    np.testing.assert_array_equal(T, brute_r0())
    assert T[0, 1, 1, 0] == 1
    assert T[0, 1, 0, 1] == -1
    assert T[0, 1, 2, 3] == 0
    validate(T)


def test_antisymmetry_violation_reported():
    T = np.zeros((4,) * 4)
    T[0, 1, 0, 1] = 1.0
    T[1, 0, 0, 1] = 1.0
    with pytest.raises(SymmetryViolation) as err:
        validate(T)
    assert err.value.which == "antisymmetry"
    assert err.value.magnitude == 2.0


def test_ricci_and_scalar_of_r0():
    np.testing.assert_array_equal(ricci(r0()), brute_ricci(r0()))
    np.testing.assert_array_equal(ricci(r0()), 3 * np.eye(4))
    assert scalar(r0()) == 12
    assert scalar(np.zeros((4,) * 4)) == 0


def test_ricci_of_r_phi():
    R = r_phi(standard_structure().phi2)
    np.testing.assert_allclose(brute_ricci(R), 3 * np.eye(4), atol=1e-14)
    assert scalar(R) == pytest.approx(12)


def test_ell_examples():
    np.testing.assert_array_equal(ell(np.eye(4)), 2 * r0())
    np.testing.assert_array_equal(ell(np.zeros((4, 4))), 0)
    np.testing.assert_allclose(ell(3 * np.eye(4)), 6 * r0())


def test_kulkarni_examples(rng):
    np.testing.assert_array_equal(kulkarni(np.eye(4)), 2 * r0())
    np.testing.assert_array_equal(kulkarni(np.zeros((4, 4))), 0)
    for _ in range(20):
        h = sym(rng)
        np.testing.assert_allclose(kulkarni(h), ell(h), atol=1e-14)
        validate(kulkarni(h))


def test_kulkarni_rejects_nonsymmetric():
    with pytest.raises(NonSymmetric):
        kulkarni(np.triu(np.ones((4, 4))))


@pytest.mark.parametrize("c", [1.0, -2.5])
def test_weyl_of_constant_curvature_vanishes(c):
    assert norm(weyl(c * r0())) == 0.0


def test_weyl_of_r_phi():
    Q = standard_structure()
    W = weyl(r_phi(Q.phi1))
    np.testing.assert_allclose(W, r_phi(Q.phi1) - r0(), atol=1e-14)
    J = jacobi_op(W, [1, 0, 0, 0])
    np.testing.assert_allclose(np.sort(np.linalg.eigvalsh(J[1:, 1:])), [-1, -1, 2], atol=1e-14)


def test_weyl_kills_kulkarni_100():
    rng = np.random.default_rng(100)
    for _ in range(100):
        h = sym(rng)
        assert norm(weyl(kulkarni(h))) <= 1e-10 * (1 + norm(kulkarni(h)))


def test_weyl_projection_properties_1000():
    rng = np.random.default_rng(5)
    for seed in range(1000):
        R = random_act(seed)
        W = weyl(R)
        assert norm(weyl(W) - W) <= 1e-10
        assert np.max(np.abs(ricci(W))) <= 1e-10 * (1 + norm(R))
        if seed < 100:
            h = sym(rng)
            assert norm(weyl(R + kulkarni(h)) - W) <= 1e-10 * (1 + norm(R) + norm(h))


def test_random_act_deterministic_and_valid():
    for seed in range(20):
        validate(random_act(seed))
    np.testing.assert_array_equal(random_act(1), random_act(1))
    assert norm(random_act(1) - random_act(2)) > 1e-6


def test_random_act_spans_20_dimensions():
    X = np.array([random_act(s).ravel() for s in range(40)])
    assert np.linalg.matrix_rank(X, tol=1e-9) == 20


def test_projection_is_idempotent(rng):
    A = rng.standard_normal((4,) * 4)
    P = curvature.project_curvature(A)
    validate(P)
    np.testing.assert_allclose(curvature.project_curvature(P), P, atol=1e-15)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(-5, 5))
def test_transform_commutes_with_weyl(seed, c):
    rng = np.random.default_rng(seed)
    Q, _ = np.linalg.qr(rng.standard_normal((4, 4)))
    R = random_act(seed) + c * r0()
    np.testing.assert_allclose(curvature.transform(weyl(R), Q), weyl(curvature.transform(R, Q)), atol=1e-12)


def test_complete_by_symmetry_fills_orbit():
    T = curvature.complete_by_symmetry([((0, 1, 1, 0), 2.0)])
    assert T[1, 0, 0, 1] == 2.0
    assert T[0, 1, 0, 1] == -2.0
    assert T[1, 0, 1, 0] == -2.0


def test_complete_by_symmetry_conflict():
    with pytest.raises(ParseError):
        curvature.complete_by_symmetry([((0, 1, 1, 0), 2.0), ((0, 1, 0, 1), 2.0)])
    with pytest.raises(ParseError):
        curvature.complete_by_symmetry([((0, 0, 1, 2), 1.0)])


def test_nonzero_components_round_trip():
    R = random_act(11)
    recs = curvature.nonzero_components(R)
    assert len(recs) == 21  # i<j, k<l, (ij) <= (kl)
    back = curvature.from_records(recs)
    np.testing.assert_allclose(back, R, rtol=0, atol=1e-15)
    assert curvature.nonzero_components(back) == recs
