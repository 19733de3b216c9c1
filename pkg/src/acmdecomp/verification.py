"""Numerical property suites run by ``acmdecomp selftest``.

Each check reports the worst residual seen over all trials against a fixed
tolerance.  Residuals on tensors are scaled by ``max(1, |F|)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import classifier, decomposition as dec, equivariance as eqv, forms, tensors
from .structure import TAU_ALG, AcmStructure, h_matrix, standard_structure, validate_structure


@dataclass
class CheckResult:
    name: str
    max_residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.max_residual <= self.tolerance)

    def to_json(self) -> dict:
        return {"check": self.name, "max_residual": self.max_residual,
                "tolerance": self.tolerance, "pass": self.passed}


class _Tracker:
    def __init__(self):
        self.worst: dict[str, float] = {}
        self.tols: dict[str, float] = {}

    def record(self, name, value, tol=TAU_ALG):
        self.tols[name] = tol
        self.worst[name] = max(self.worst.get(name, 0.0), float(value))

    def results(self):
        return [CheckResult(k, self.worst[k], self.tols[k]) for k in self.worst]


def _rel(a, scale) -> float:
    return float(np.max(np.abs(a))) / max(1.0, scale)


def structure_checks(S: AcmStructure, t: _Tracker) -> None:
    t.record("structure axioms", validate_structure(S).max_residual)
    H = h_matrix(S)
    t.record("h idempotent and self-adjoint",
             max(np.max(np.abs(H @ H - H)), np.max(np.abs(H - H.T)),
                 np.max(np.abs(H @ S.xi))))
    t.record("phi h = h phi = phi",
             max(np.max(np.abs(S.phi @ H - S.phi)), np.max(np.abs(H @ S.phi - S.phi))))
    t.record("rank h = 2n", abs(np.linalg.matrix_rank(H) - 2 * S.n))


def form_checks(S: AcmStructure, F, G, t: _Tracker) -> None:
    nF = tensors.norm(F)
    for i in forms.defined_forms(S.n):
        t.record("closure of associated forms",
                 tensors.membership_residual(S, forms.associated_form(S, i, F)) / max(1.0, nF))
    hF = forms.h_form(S, F)
    t.record("closure of hF", tensors.membership_residual(S, hF) / max(1.0, nF))
    t.record("hF idempotent", _rel(forms.h_form(S, hF) - hF, nF))
    recon = F - hF - forms.form1(S, F) - forms.form2(S, F) + forms.form3(S, F)
    t.record("reconstruction F = hF + F1 + F2 - F3", tensors.norm(recon) / max(1.0, nF))
    t.record("composition table", forms.composition_table_residual(S, F) / max(1.0, nF))
    t.record("trace table", forms.trace_table_residual(S, F) / max(1.0, nF))
    horiz = max(_rel(hF + np.swapaxes(hF, 1, 2), nF),
                _rel(hF + tensors.phi_pull(S, hF, (1, 2)), nF))
    t.record("horizontal identities of hF", horiz)
    a, b = 0.7, -1.3
    for i in forms.defined_forms(S.n):
        lhs = forms.associated_form(S, i, a * F + b * G)
        rhs = a * forms.associated_form(S, i, F) + b * forms.associated_form(S, i, G)
        t.record("linearity of forms", _rel(lhs - rhs, nF + tensors.norm(G)))


def decomposition_checks(S: AcmStructure, F, G, t: _Tracker) -> None:
    nF, nG = tensors.norm(F), tensors.norm(G)
    idx = dec.defined_components(S.n)
    comps = dec.components(S, F)
    t.record("completeness", tensors.norm(F - sum(comps.values())) / max(1.0, nF))
    for i in idx:
        for j in idx:
            pij = dec.project(S, i, comps[j])
            target = comps[i] if i == j else 0.0
            t.record("idempotence and annihilation", _rel(pij - target, nF))
    M = dec.orthogonality_matrix(S, F, G)
    off = M - np.diag(np.diag(M))
    t.record("orthogonality", float(np.max(np.abs(off))) / max(1.0, nF * nG))
    pyth = abs(nF ** 2 - sum(tensors.norm(c) ** 2 for c in comps.values()))
    t.record("Pythagoras (relative)", pyth / max(1.0, nF ** 2), 1e-8)


def involution_domains(S: AcmStructure, F) -> dict:
    """A domain element for each involution, assembled from components."""
    p = dec.components(S, F)
    return {
        1: F,
        2: F - p[1],
        3: sum(p[i] for i in range(2, 9)),
        4: sum(p[i] for i in range(2, 8)),
        5: p[2] + p[3] + p[4] + p[5],
        "5~": p[6] + p[7],
        6: p[2] + p[4],
        7: p[3] + p[5],
    }


def _cond(S, name, F):
    A = lambda k: forms.associated_form(S, k, F)  # noqa: E731
    if name == "F=F3":
        return F - A(3)
    if name == "omega=0":
        return tensors.trace_omega(S, F)
    if name == "hF=0":
        return forms.h_form(S, F)
    if name == "F1=F2=0":
        return np.concatenate([A(1).ravel(), A(2).ravel()])
    if name == "F(x,y,xi)=0":
        return np.einsum("ija,a->ij", F, S.xi)
    if name == "F(xi,y,z)=0":
        return np.einsum("a,ajk->jk", S.xi, F)
    if name == "F=F4":
        return F - A(4)
    if name == "F=-F4":
        return F + A(4)
    if name == "F=F5":
        return F - A(5)
    if name == "F=-F5":
        return F + A(5)
    if name == "F=F7":
        return F - A(7)
    if name == "F=F8":
        return F - A(8)
    if name == "f(xi)=0":
        return np.atleast_1d(tensors.trace_f(S, F) @ S.xi)
    if name == "f*(xi)=0":
        return np.atleast_1d(tensors.trace_f_star(S, F) @ S.xi)
    raise KeyError(name)


# (involution, domain key): (conditions on F+, conditions on F-)
EIGENSPACE_CONDITIONS = {
    (1, 1): (["omega=0"], ["F=F3"]),
    (2, 2): (["F1=F2=0"], ["hF=0", "omega=0"]),
    (3, 3): (["hF=0", "F(xi,y,z)=0"], ["hF=0", "F(x,y,xi)=0"]),
    (4, 4): (["F=-F4"], ["F=F4"]),
    (5, 5): (["F=F4", "F=-F5"], ["F=F4", "F=F5"]),
    (5, "5~"): (["F=-F4", "F=-F5"], ["F=-F4", "F=F5"]),
    (6, 6): (["F=F4", "F=F5", "f(xi)=0"], ["F=F7"]),
    (7, 7): (["F=F4", "F=-F5", "f*(xi)=0"], ["F=F8"]),
}


def involution_checks(S: AcmStructure, F, t: _Tracker) -> None:
    doms = involution_domains(S, F)
    for (k, key), (plus_conds, minus_conds) in EIGENSPACE_CONDITIONS.items():
        X = doms[key]
        nX = tensors.norm(X)
        LX = dec.involution(S, k, X)
        t.record("involutions are involutive", _rel(dec.involution(S, k, LX) - X, nX))
        t.record("involutions are isometric", abs(tensors.norm(LX) - nX) / max(1.0, nX))
        plus, minus = 0.5 * (X + LX), 0.5 * (X - LX)
        worst = 0.0
        for c in plus_conds:
            worst = max(worst, _rel(_cond(S, c, plus), nX))
        for c in minus_conds:
            worst = max(worst, _rel(_cond(S, c, minus), nX))
        t.record("eigenspaces match defining conditions", worst)


def equivariance_checks(S: AcmStructure, F, G, a: eqv.StructureIsometry, t: _Tracker) -> None:
    nF, nG = tensors.norm(F), tensors.norm(G)
    t.record("isometry invariants", max(eqv.isometry_residuals(S, a).values()))
    aF = eqv.act(a, F)
    for i in dec.defined_components(S.n):
        t.record("equivariance of projections",
                 _rel(dec.project(S, i, aF) - eqv.act(a, dec.project(S, i, F)), nF))
    t.record("action preserves inner product",
             abs(tensors.inner_product(aF, eqv.act(a, G)) - tensors.inner_product(F, G))
             / max(1.0, nF * nG))
    t.record("action preserves constraint space",
             tensors.membership_residual(S, aF) / max(1.0, nF))
    tr, tra = tensors.traces(S, F), tensors.traces(S, aF)
    t.record("equivariance of traces", max(
        _rel(tra.f - eqv.act_covector(a, tr.f), nF),
        _rel(tra.f_star - eqv.act_covector(a, tr.f_star), nF),
        _rel(tra.omega - eqv.act_covector(a, tr.omega), nF)))


def classifier_checks(S: AcmStructure, F, t: _Tracker) -> None:
    bad = 0
    for i in dec.defined_components(S.n):
        label = classifier.classify_tensor(S, dec.project(S, i, F))
        if not (label.kind == "cosymplectic" or (label.kind == "single" and label.classes == (i,))):
            bad += 1
    t.record("classifier consistency (mismatches)", bad, 0)


def oracle_checks(S: AcmStructure, seeds, fresh, t: _Tracker) -> dict:
    total = 0
    dims = {}
    for i in dec.defined_components(S.n):
        basis = dec.subspace_basis_oracle(S, i, seeds)
        dims[i] = basis.dimension
        total += basis.dimension
        for F in fresh:
            nF = tensors.norm(F)
            t.record("oracle equivalence (relative)",
                     tensors.norm(basis.project(F) - dec.project(S, i, F)) / max(1.0, nF), 1e-8)
    t.record("sum of component dimensions = dim F (mismatch)",
             abs(total - tensors.space_dimension(S)), 0)
    gaps = sum(classifier.class_dimension(S, [i, j]) for i in dims for j in dims if i < j)
    t.record("pairwise class intersections (dimension)", gaps, 0)
    own = sum(abs(classifier.class_dimension(S, [i]) - dims[i]) for i in dims)
    t.record("defining-condition dimensions = component dimensions (mismatch)", own, 0)
    return dims


def run_selftest(n: int, trials: int, seed: int = 42) -> dict:
    """Run every suite at size ``n`` and return a JSON-ready report."""
    if n < 1 or trials < 1:
        raise ValueError("n and trials must be >= 1")
    S = standard_structure(n)
    rng = np.random.default_rng(seed)
    t = _Tracker()
    structure_checks(S, t)
    for _ in range(trials):
        sF, sG, sA = (int(x) for x in rng.integers(0, 2 ** 31, size=3))
        F = tensors.random_element(S, sF)
        G = tensors.random_element(S, sG)
        t.record("random elements in constraint space", tensors.membership_residual(S, F))
        form_checks(S, F, G, t)
        decomposition_checks(S, F, G, t)
        involution_checks(S, F, t)
        equivariance_checks(S, F, G, eqv.random_isometry(S, sA), t)
        classifier_checks(S, F, t)
    dim = tensors.space_dimension(S)
    seeds = [int(x) for x in rng.integers(0, 2 ** 31, size=dim + 10)]
    fresh = [tensors.random_element(S, int(x)) for x in rng.integers(0, 2 ** 31, size=5)]
    dims = oracle_checks(S, seeds, fresh, t)
    results = t.results()
    return {
        "n": n,
        "trials": trials,
        "seed": seed,
        "dim_F": dim,
        "component_dimensions": [dims.get(i) for i in dec.COMPONENTS],
        "absent_components": [i for i in dec.COMPONENTS if i not in dims],
        "checks": [r.to_json() for r in results],
        "pass": all(r.passed for r in results),
    }
