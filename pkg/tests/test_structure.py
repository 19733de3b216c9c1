import numpy as np
import pytest

from acmdecomp.structure import (AcmStructure, adapted_frame, h_map, h_matrix, in_frame,
                                 normalize, orthonormal_frame, standard_structure,
                                 structure_from_json, validate_structure)


def _modified(S, **kw):
    fields = dict(n=S.n, phi=S.phi, xi=S.xi, eta=S.eta, g=S.g)
    fields.update(kw)
    return AcmStructure(**fields)


def test_standard_n1_matrix():
    S = standard_structure(1)
    assert S.dim == 3
    np.testing.assert_array_equal(S.phi, [[0, -1, 0], [1, 0, 0], [0, 0, 0]])


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_standard_is_valid(n):
    report = validate_structure(standard_structure(n))
    assert report.ok
    assert report.max_residual <= 1e-12
    assert report.violated_axioms == []


def test_phi_squared_identity():
    S = standard_structure(2)
    np.testing.assert_array_equal(S.phi @ S.phi, -np.eye(5) + np.outer(S.xi, S.eta))


def test_rejects_nonpositive_n():
    with pytest.raises(ValueError):
        standard_structure(0)
    with pytest.raises(ValueError):
        standard_structure(-3)


def test_xi_not_unit_is_flagged():
    S = standard_structure(2)
    g = S.g.copy()
    g[-1, -1] = 2.0
    report = validate_structure(_modified(S, g=g))
    assert not report.ok
    assert "g(xi,xi)=1" in report.violated_axioms


def test_sign_flip_on_one_plane_still_valid():
    S = standard_structure(2)
    phi = S.phi.copy()
    phi[0:2, 0:2] *= -1
    assert validate_structure(_modified(S, phi=phi)).ok


def test_eta_must_be_metric_dual():
    S = standard_structure(1)
    eta = S.eta.copy()
    eta[0] = 0.3
    report = validate_structure(_modified(S, eta=eta))
    assert not report.ok
    assert "eta=g(.,xi)" in report.violated_axioms


def test_dimension_mismatch_is_an_error():
    S = standard_structure(1)
    with pytest.raises(ValueError):
        AcmStructure(n=2, phi=S.phi, xi=S.xi, eta=S.eta, g=S.g)


def test_h_map_examples():
    S = standard_structure(2)
    e1 = np.eye(5)[0]
    np.testing.assert_array_equal(h_map(S, S.xi), np.zeros(5))
    np.testing.assert_array_equal(h_map(S, e1), e1)
    np.testing.assert_array_equal(h_map(S, e1 + S.xi), e1)


def test_h_properties(S):
    H = h_matrix(S)
    np.testing.assert_allclose(H @ H, H, atol=1e-12)
    np.testing.assert_allclose(H, H.T, atol=1e-12)
    assert np.linalg.matrix_rank(H) == 2 * S.n
    np.testing.assert_allclose(H @ S.xi, 0, atol=1e-12)
    np.testing.assert_allclose(S.phi @ H, S.phi, atol=1e-12)
    np.testing.assert_allclose(H @ S.phi, S.phi, atol=1e-12)


def _skewed_structure(n, seed):
    """Standard structure written in a random non-orthonormal basis."""
    S = standard_structure(n)
    rng = np.random.default_rng(seed)
    B = np.eye(S.dim) + 0.3 * rng.standard_normal((S.dim, S.dim))
    return in_frame(S, B)


def test_normalize_from_arbitrary_basis():
    T = _skewed_structure(2, 1)
    assert not T.is_orthonormal()
    assert validate_structure(T).ok
    N, E = normalize(T)
    assert N.is_orthonormal()
    assert validate_structure(N).ok
    np.testing.assert_allclose(N.xi, np.eye(5)[-1], atol=1e-12)
    np.testing.assert_allclose(E.T @ T.g @ E, np.eye(5), atol=1e-12)


def test_adapted_frame_is_phi_adapted():
    T = _skewed_structure(3, 2)
    E = adapted_frame(T.g, T.phi, T.xi)
    A = in_frame(T, E)
    np.testing.assert_allclose(A.phi, standard_structure(3).phi, atol=1e-10)
    np.testing.assert_allclose(A.g, np.eye(7), atol=1e-10)


def test_orthonormal_frame_pins_xi_last():
    T = _skewed_structure(1, 3)
    E = orthonormal_frame(T.g, T.xi)
    np.testing.assert_allclose(E[:, -1], T.xi / np.sqrt(T.xi @ T.g @ T.xi))


def test_structure_json_defaults_and_normalization():
    S = structure_from_json({"n": 2})
    np.testing.assert_array_equal(S.phi, standard_structure(2).phi)
    T = _skewed_structure(1, 4)
    S = structure_from_json(T.to_json())
    assert S.is_orthonormal() and validate_structure(S).ok


def test_structure_json_rejects_bad_input():
    with pytest.raises(ValueError):
        structure_from_json({"phi": [[0]]})
    bad = standard_structure(1).to_json()
    bad["g"][2][2] = 4.0
    with pytest.raises(ValueError, match="g\\(xi,xi\\)=1"):
        structure_from_json(bad)
