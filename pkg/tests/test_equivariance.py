import numpy as np
import pytest

from acmdecomp import decomposition as dec
from acmdecomp.equivariance import (StructureIsometry, act, act_covector,
                                    is_structure_isometry, isometry_from_generator,
                                    isometry_residuals, random_frame_change, random_isometry,
                                    unitary_generator)
from acmdecomp.structure import standard_structure
from acmdecomp.tensors import inner_product, random_element, traces


def _expm_by_eigen(X):
    """exp of a real skew matrix through its (normal) eigendecomposition."""
    w, V = np.linalg.eig(X)
    return (V @ np.diag(np.exp(w)) @ np.linalg.inv(V)).real


def test_expm_matches_eigendecomposition(S):
    X = unitary_generator(S, np.random.default_rng(3).standard_normal((S.dim, S.dim)))
    np.testing.assert_allclose(isometry_from_generator(S, X).a, _expm_by_eigen(X), atol=1e-12)


def test_zero_generator_is_identity(S):
    a = isometry_from_generator(S, np.zeros((S.dim, S.dim)))
    np.testing.assert_array_equal(a.a, np.eye(S.dim))


def test_phi_generator_rotates_each_plane():
    S = standard_structure(2)
    theta = 0.7
    a = isometry_from_generator(S, theta * S.phi).a
    c, s = np.cos(theta), np.sin(theta)
    expected = np.eye(5)
    for k in (0, 2):
        expected[k:k + 2, k:k + 2] = [[c, -s], [s, c]]
    np.testing.assert_allclose(a, expected, atol=1e-14)


def test_generator_properties(S):
    X = unitary_generator(S, np.random.default_rng(4).standard_normal((S.dim, S.dim)))
    np.testing.assert_allclose(X, -X.T, atol=1e-14)
    np.testing.assert_allclose(X @ S.phi, S.phi @ X, atol=1e-14)
    np.testing.assert_allclose(X @ S.xi, 0, atol=1e-14)


def test_random_isometry_preserves_structure(S):
    for seed in range(10):
        a = random_isometry(S, seed)
        assert is_structure_isometry(S, a)
        assert max(isometry_residuals(S, a).values()) <= 1e-12


def test_non_isometry_detected():
    S = standard_structure(1)
    assert not is_structure_isometry(S, StructureIsometry(2.0 * np.eye(3)))
    swap = np.eye(3)[[1, 0, 2]]
    assert not is_structure_isometry(S, StructureIsometry(swap))


def test_group_closure(S):
    a, b = random_isometry(S, 1), random_isometry(S, 2)
    assert is_structure_isometry(S, a @ b)
    assert is_structure_isometry(S, a.inverse())
    F = random_element(S, 3)
    np.testing.assert_allclose(act(a @ b, F), act(a, act(b, F)), atol=1e-12)
    np.testing.assert_allclose(act(a.inverse(), act(a, F)), F, atol=1e-12)


def test_act_example():
    S = standard_structure(1)
    a = isometry_from_generator(S, 0.5 * np.pi * S.phi)
    F = np.zeros((3, 3, 3))
    F[0, 0, 2] = 1.0
    # a^-1 e_2 = e_1 after a quarter turn, so (aF)(e_2, e_2, xi) = F(e_1, e_1, xi)
    assert act(a, F)[1, 1, 2] == pytest.approx(1.0)
    assert act(a, F)[0, 0, 2] == pytest.approx(0.0, abs=1e-15)


def test_equivariance_of_projections(S):
    for seed in range(5):
        a = random_isometry(S, 100 + seed)
        F = random_element(S, seed)
        aF = act(a, F)
        for i in dec.defined_components(S.n):
            np.testing.assert_allclose(dec.project(S, i, aF), act(a, dec.project(S, i, F)),
                                       atol=1e-9)


def test_inner_product_invariant(S):
    a = random_isometry(S, 7)
    F, G = random_element(S, 8), random_element(S, 9)
    assert inner_product(act(a, F), act(a, G)) == pytest.approx(inner_product(F, G), abs=1e-9)


def test_traces_are_equivariant(S):
    a = random_isometry(S, 5)
    F = random_element(S, 6)
    t, ta = traces(S, F), traces(S, act(a, F))
    np.testing.assert_allclose(ta.f, act_covector(a, t.f), atol=1e-12)
    np.testing.assert_allclose(ta.f_star, act_covector(a, t.f_star), atol=1e-12)
    np.testing.assert_allclose(ta.omega, act_covector(a, t.omega), atol=1e-12)


def test_frame_change_is_orthogonal_and_fixes_xi(S):
    Q = random_frame_change(S, 3)
    np.testing.assert_allclose(Q.T @ Q, np.eye(S.dim), atol=1e-12)
    np.testing.assert_allclose(Q @ S.xi, S.xi, atol=1e-12)
