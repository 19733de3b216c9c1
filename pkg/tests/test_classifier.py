import itertools

import numpy as np
import pytest

from acmdecomp import decomposition as dec
from acmdecomp.classifier import (ClassLabel, class_dimension, classify, classify_tensor,
                                  defining_residual, defining_residuals)
from acmdecomp.decomposition import ComponentSpectrum
from acmdecomp.forms import DegenerateDimensionError, metric_form, twisted_form
from acmdecomp.structure import standard_structure
from acmdecomp.tensors import random_element


def _spec(norms, n=2):
    return ComponentSpectrum(n=n, norms=tuple(norms), residual=0.0, membership=0.0)


def _f3_shape(S):
    e = S.eta
    w = np.zeros(S.dim)
    w[0] = 1.0
    return np.einsum("i,j,k->ijk", e, e, w) - np.einsum("i,k,j->ijk", e, e, w)


def test_defining_residual_examples(S2):
    assert defining_residual(S2, 2, metric_form(S2)) <= 1e-9
    assert defining_residual(S2, 3, twisted_form(S2)) <= 1e-9
    assert defining_residual(S2, 2, _f3_shape(S2)) > 0.5
    zero = np.zeros((5, 5, 5))
    assert all(r == 0.0 for r in defining_residuals(S2, zero))


def test_degenerate_classes_at_n1():
    S = standard_structure(1)
    res = defining_residuals(S, np.zeros((3, 3, 3)))
    assert res[8] is None and res[9] is None
    with pytest.raises(DegenerateDimensionError):
        defining_residual(S, 10, np.zeros((3, 3, 3)))


def test_classify_examples():
    assert classify(_spec([0.0] * 12), [0.0] * 12).kind == "cosymplectic"
    norms = [0.0] * 12
    norms[1] = 2.0
    label = classify(_spec(norms), [0.0] * 12)
    assert (label.kind, label.classes) == ("single", (2,))
    norms[2] = 1.0
    label = classify(_spec(norms), [0.0] * 12)
    assert (label.kind, label.classes) == ("sum", (2, 3))


def test_classify_disagreement_is_reported():
    norms = [0.0] * 12
    norms[1] = 2.0
    residuals = [0.0] * 12
    residuals[1] = 0.5
    label = classify(_spec(norms), residuals)
    assert label.kind == "sum"
    assert "disagreement" in label.diagnostics


def test_classify_length_mismatch():
    with pytest.raises(ValueError):
        classify(_spec([0.0] * 11), [0.0] * 12)
    with pytest.raises(ValueError):
        classify(_spec([0.0] * 12), [0.0] * 3)


def test_classify_n1_absent_components():
    norms = [0.0] * 12
    norms[8] = norms[9] = None
    label = classify(_spec(norms, n=1), [0.0] * 8 + [None, None, 0.0, 0.0])
    assert label.kind == "cosymplectic"
    assert label.diagnostics["absent"] == [9, 10]


def test_label_json():
    label = ClassLabel("single", (4,), 1e-6, {"x": 1})
    assert label.to_json() == {"kind": "single", "classes": [4], "tol": 1e-6,
                               "diagnostics": {"x": 1}}


def test_components_classify_as_their_class(S):
    for seed in range(3):
        F = random_element(S, 40 + seed)
        for i in dec.defined_components(S.n):
            label = classify_tensor(S, dec.project(S, i, F))
            assert label.kind in ("single", "cosymplectic")
            if label.kind == "single":
                assert label.classes == (i,)
            else:
                # components that are identically zero at this n
                assert dec.subspace_basis_oracle(S, i, range(1, 40)).dimension == 0


def test_generic_tensor_is_a_sum(S):
    label = classify_tensor(S, random_element(S, 1))
    assert label.kind == "sum"
    assert len(label.classes) >= 2


def test_class_dimensions_match_components(S):
    for i in dec.defined_components(S.n):
        oracle = dec.subspace_basis_oracle(S, i, range(1, 60)).dimension
        assert class_dimension(S, [i]) == oracle, i


def test_classes_intersect_trivially(S):
    for i, j in itertools.combinations(dec.defined_components(S.n), 2):
        assert class_dimension(S, [i, j]) == 0, (i, j)


def test_nonzero_component_fails_every_other_class(S):
    F = random_element(S, 77)
    for i in dec.defined_components(S.n):
        Fi = dec.project(S, i, F)
        if np.linalg.norm(Fi) <= 1e-9:
            continue
        assert defining_residual(S, i, Fi) <= 1e-9
        for j in dec.defined_components(S.n):
            if j != i:
                assert defining_residual(S, j, Fi) > 1e-9, (i, j)


def test_tol_monotone(S2):
    F = random_element(S2, 9)
    F = dec.project(S2, 4, F) + 1e-3 * dec.project(S2, 6, F) + 1e-6 * dec.project(S2, 2, F)
    sizes = [len(classify_tensor(S2, F, tol).classes) for tol in (1e-9, 1e-5, 1e-2, 10.0)]
    assert sizes == sorted(sizes, reverse=True)
    assert sizes[0] == 3 and sizes[-1] == 0
