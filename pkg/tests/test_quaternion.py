import itertools

import numpy as np
import pytest

from osserman4d import curvature, duality
from osserman4d.curvature import norm, r0, random_act, ricci, scalar, weyl
from osserman4d.errors import NotAComplexStructure, NotHalfFlat, NotOrthonormal
from osserman4d.lintensor import hodge_star, random_orthogonal, two_form
from osserman4d.osserman import adapted_basis, adapted_pattern, jacobi_op, osserman_exact
from osserman4d.quaternion import kahler_form, r_phi, recover, standard_structure, synthesize

E = np.eye(4)


def brute_r_phi(phi):
    # <R_Phi(x,y)z, w> evaluated from the vector formula on basis vectors
    T = np.zeros((4,) * 4)
    for i, j, k, l in itertools.product(range(4), repeat=4):
        x, y, z, w = E[i], E[j], E[k], E[l]
        vec = (phi @ y @ z) * (phi @ x) - (phi @ x @ z) * (phi @ y) - 2 * (phi @ x @ y) * (phi @ z)
        T[i, j, k, l] = vec @ w
    return T


def random_structure(seed, det=1):
    return standard_structure().conjugate(random_orthogonal(np.random.default_rng(seed), det))


def test_r_phi_matches_formula():
    for phi in standard_structure().phis + random_structure(3).phis:
        np.testing.assert_allclose(r_phi(phi), brute_r_phi(phi), atol=1e-14)


def test_r_phi_components():
    R = r_phi(standard_structure().phi1)
    assert R[0, 1, 1, 0] == 3
    assert R[0, 1, 2, 3] == -2
    curvature.validate(R)


def test_r_phi_even_in_phi():
    phi = random_structure(1).phi2
    np.testing.assert_allclose(r_phi(-phi), r_phi(phi), atol=0)


def test_r_phi_jacobi(rng):
    phi = random_structure(2).phi1
    x = rng.standard_normal(4)
    x /= np.linalg.norm(x)
    np.testing.assert_allclose(jacobi_op(r_phi(phi), x), 3 * np.outer(phi @ x, phi @ x), atol=1e-14)


def test_r_phi_rejects_non_complex():
    with pytest.raises(NotAComplexStructure):
        r_phi(2 * standard_structure().phi1)
    with pytest.raises(NotAComplexStructure):
        r_phi(np.eye(4))


def test_standard_structure_kahler_forms():
    Q = standard_structure()
    assert Q.violations() == {}
    np.testing.assert_array_equal(kahler_form(Q.phi1), two_form(e12=1, e34=1))
    np.testing.assert_array_equal(kahler_form(Q.phi2), two_form(e13=1, e24=-1))
    np.testing.assert_array_equal(kahler_form(Q.phi3), two_form(e14=1, e23=1))
    np.testing.assert_array_equal(Q.phi1 @ Q.phi2 @ E[0], E[3])
    np.testing.assert_array_equal(Q.phi2 @ Q.phi1 @ E[0], -E[3])


def test_reversed_basis_is_anti_self_dual():
    Q = standard_structure(np.diag([1.0, 1.0, 1.0, -1.0]))
    assert Q.violations() == {}
    for phi in Q.phis:
        w = kahler_form(phi)
        np.testing.assert_array_equal(hodge_star(w), -w)
    assert Q.duality_side() == -1


def test_flipped_phi2_table_breaks_anticommutation():
    bad = standard_structure(flipped_phi2=True).violations()
    assert "anticommute12" in bad and "same_hodge_side" in bad


def test_standard_structure_needs_orthonormal():
    with pytest.raises(NotOrthonormal):
        standard_structure(2 * np.eye(4))


def test_structures_from_random_frames_valid():
    for seed in range(50):
        assert random_structure(seed, 1 if seed % 2 else -1).violations() == {}


def test_synthesize_examples():
    Q = standard_structure()
    assert norm(synthesize(Q, [0, 0, 0])) == 0
    T = synthesize(Q, [1, 1, 1])
    np.testing.assert_allclose(ricci(T), 9 * np.eye(4), atol=1e-14)
    assert scalar(T) == pytest.approx(36)
    W = synthesize(Q, [0.3, -1.1, 0.8])
    np.testing.assert_allclose(weyl(W), W, atol=1e-14)
    assert duality.classify(synthesize(Q, [1, -1, 0])).cls == duality.SELF_DUAL


def test_half_block_eigenvalues_of_synthesis():
    rng = np.random.default_rng(9)
    for _ in range(20):
        lam = rng.uniform(-1, 1, 3)
        lam -= lam.mean()
        rep = duality.classify(synthesize(standard_structure(), lam))
        np.testing.assert_allclose(rep.plus_eigenvalues, np.sort(-6 * lam), atol=1e-9)


def test_synthesis_is_conformally_osserman():
    for seed in range(10):
        lam = np.random.default_rng(seed).uniform(-1, 1, 3)
        lam -= lam.mean()
        W = synthesize(random_structure(seed, 1 if seed % 2 else -1), lam)
        assert osserman_exact(W, use_weyl=True).osserman
        assert osserman_exact(W, use_weyl=False).osserman


def test_recover_r_phi_weyl():
    dec = recover(weyl(r_phi(standard_structure().phi1)))
    np.testing.assert_allclose(np.sort(dec.lambdas), [-1 / 3, -1 / 3, 2 / 3], atol=1e-14)
    assert dec.residual < 1e-10
    assert dec.structure.violations() == {}


def test_recover_zero():
    dec = recover(np.zeros((4,) * 4))
    np.testing.assert_array_equal(dec.lambdas, 0)
    assert dec.residual == 0


def test_recover_round_trip_rotated():
    W = synthesize(random_structure(21), [2, -5, 3])
    dec = recover(W)
    np.testing.assert_allclose(np.sort(dec.lambdas), [-5, 2, 3], atol=1e-8)
    assert dec.residual < 1e-8
    assert not dec.orientation_flipped


def test_recover_anti_self_dual():
    W = synthesize(random_structure(22, det=-1), [2, -5, 3])
    dec = recover(W)
    assert dec.orientation_flipped
    assert dec.structure.duality_side() == -1
    assert dec.structure.violations() == {}
    np.testing.assert_allclose(np.sort(dec.lambdas), [-5, 2, 3], atol=1e-8)
    assert dec.residual < 1e-8 * (1 + norm(W))


def test_recover_lambdas_are_jacobi_thirds():
    for seed in range(20):
        lam = np.random.default_rng(seed).uniform(-1, 1, 3)
        W = synthesize(random_structure(seed), lam - lam.mean())
        dec = recover(W)
        abc = adapted_basis(W, E[0]).abc
        np.testing.assert_allclose(np.sort(dec.lambdas), np.sort(abc) / 3, atol=1e-9)


def test_recover_reproduces_pattern_in_adapted_frame():
    W = synthesize(random_structure(5), [0.7, -0.2, -0.5])
    frame = adapted_basis(W, E[0])
    a, b, c = frame.abc
    Wf = curvature.transform(W, frame.basis.T)
    np.testing.assert_allclose(Wf, adapted_pattern(a, b, c), atol=1e-12)


def test_recover_rejects_generic():
    with pytest.raises(NotHalfFlat):
        recover(random_act(7))


def test_recover_takes_weyl_part():
    W = synthesize(random_structure(3), [1, 0, -1])
    dec = recover(W + 4 * r0())
    assert dec.residual < 1e-10
