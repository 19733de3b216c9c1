"""Class verdicts W_1 ... W_12 from component norms and defining conditions.

Every defining condition is linear in F, so ``defining_violations`` returns a
flat vector whose max-abs is the residual and whose null space (together with
the constraint space) is the class itself.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .decomposition import COMPONENTS, ComponentSpectrum
from .forms import DegenerateDimensionError, associated_form, h_form, lee_form
from .structure import TAU_ALG, AcmStructure
from .tensors import (check_tensor, phi_pull, require_frame, space_basis,
                      trace_f, trace_f_star)

DEFAULT_TOL = 1e-6
GEOMETRY_TOL = 1e-3

KINDS = ("cosymplectic", "single", "sum", "unclassified-n1-gap")


def _xi_first(S, F):
    return np.einsum("a,ajk->jk", S.xi, F)


def _xi_last(S, F):
    return np.einsum("ija,a->ij", F, S.xi)


def _horizontal_prefix(S, F):
    return [_xi_first(S, F), _xi_last(S, F)]


def _parts(S: AcmStructure, i: int, F) -> list:
    A = lambda k: associated_form(S, k, F)  # noqa: E731
    xi = S.xi
    if i == 1:
        return [F - A(3)]
    if i == 2:
        return [F - A(7)]
    if i == 3:
        return [F - A(8)]
    if i == 4:
        return [F - A(4), F - A(5), np.atleast_1d(trace_f(S, F) @ xi)]
    if i == 5:
        return [F - A(4), F + A(5), np.atleast_1d(trace_f_star(S, F) @ xi)]
    if i == 6:
        return [F + A(4), F - A(5)]
    if i == 7:
        return [F + A(4), F + A(5)]
    if i == 8:
        return [h_form(S, F), _xi_last(S, F)]
    if i == 9:
        return _horizontal_prefix(S, F) + [F - lee_form(S, trace_f(S, F))]
    if i == 10:
        if S.n < 2:
            raise DegenerateDimensionError("degenerate horizontal dimension: "
                                           "W_10 needs n >= 2")
        return _horizontal_prefix(S, F) + [phi_pull(S, F, (0, 1)) - F, trace_f(S, F)]
    if i == 11:
        # F(x, x, z) = 0 for all x, polarized over basis pairs
        return _horizontal_prefix(S, F) + [F + np.swapaxes(F, 0, 1)]
    if i == 12:
        cyc = F + np.einsum("jki->ijk", F) + np.einsum("kij->ijk", F)
        return _horizontal_prefix(S, F) + [cyc]
    raise ValueError(f"class index must be in 1..12, got {i}")


def defining_violations(S: AcmStructure, i: int, F) -> np.ndarray:
    """All entrywise violations of the defining conditions of W_i, flattened."""
    require_frame(S)
    F = check_tensor(S, F)
    if i in (9, 10) and S.n < 2:
        raise DegenerateDimensionError(
            f"degenerate horizontal dimension: W_{i} needs n >= 2")
    return np.concatenate([np.ravel(p) for p in _parts(S, i, F)])


def defining_residual(S: AcmStructure, i: int, F) -> float:
    return float(np.max(np.abs(defining_violations(S, i, F))))


def defining_residuals(S: AcmStructure, F) -> list:
    """Residual per class, ``None`` where the class does not exist (n = 1)."""
    return [None if (i in (9, 10) and S.n < 2) else defining_residual(S, i, F)
            for i in COMPONENTS]


def class_dimension(S: AcmStructure, classes) -> int:
    """Dimension of the constraint space cut by the defining conditions of all
    listed classes, via the null space of the stacked linear conditions."""
    N = space_basis(S)
    d = S.dim
    m = N.shape[1]
    if m == 0:
        return 0
    cols = []
    for v in N.T:
        T = v.reshape(d, d, d)
        cols.append(np.concatenate([defining_violations(S, i, T) for i in classes]))
    M = np.array(cols).T
    s = np.linalg.svd(M, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return m
    return m - int(np.sum(s > 1e-8 * s[0]))


@dataclass(frozen=True)
class ClassLabel:
    kind: str
    classes: tuple
    tol: float
    diagnostics: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"kind": self.kind, "classes": list(self.classes), "tol": self.tol,
                "diagnostics": self.diagnostics}


def classify(spec: ComponentSpectrum, residuals, tol: float = DEFAULT_TOL) -> ClassLabel:
    """Verdict from component norms, cross-checked against defining residuals.

    Thresholds are relative: ``tol * max(1, |F|)``.  A lone nonzero component
    only yields a single-class verdict when the defining conditions of that
    class also hold; otherwise it is reported as a sum with a diagnostic.
    """
    norms = list(spec.norms)
    residuals = list(residuals)
    if len(norms) != 12 or len(residuals) != 12:
        raise ValueError(f"expected 12 norms and 12 residuals, "
                         f"got {len(norms)} and {len(residuals)}")
    total = spec.total_norm
    thresh = tol * max(1.0, total)
    absent = [i for i in COMPONENTS if norms[i - 1] is None]
    active = tuple(i for i in COMPONENTS
                   if norms[i - 1] is not None and norms[i - 1] > thresh)
    diag = {
        "norms": norms,
        "defining_residuals": residuals,
        "threshold": thresh,
        "decomposition_residual": spec.residual,
        "membership": spec.membership,
    }
    if absent:
        diag["absent"] = absent
    if not active:
        if total > thresh or spec.residual > thresh:
            # nothing in the defined components, yet F is not zero
            return ClassLabel("unclassified-n1-gap", (), tol, diag)
        return ClassLabel("cosymplectic", (), tol, diag)
    if len(active) == 1:
        i = active[0]
        r = residuals[i - 1]
        if r is not None and r <= thresh:
            return ClassLabel("single", active, tol, diag)
        diag["disagreement"] = (f"component {i} alone is nonzero but the W_{i} "
                                f"defining residual {r} exceeds {thresh:.3e}")
    return ClassLabel("sum", active, tol, diag)


def classify_tensor(S: AcmStructure, F, tol: float = DEFAULT_TOL,
                    membership_tol: float = TAU_ALG) -> ClassLabel:
    from .decomposition import spectrum

    spec = spectrum(S, F, tol=membership_tol)
    return classify(spec, defining_residuals(S, F), tol)
