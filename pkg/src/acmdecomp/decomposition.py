"""Orthogonal U(n)x1-invariant splitting of the constraint space into 12 parts.

Index conventions: component ``i`` is the subspace F_i, the image of the
projection ``p_i`` and the class W_i.  Associated *forms* are numbered
separately (see ``forms``); the projections are built from them:

====  =========================================  ===============================
 i    projection p_i                              subspace
====  =========================================  ===============================
 1    F3                                          F = F3(F)
 2    F7                                          F = F7(F)       (alpha-Sasaki)
 3    F8                                          F = F8(F)       (alpha-Kenmotsu)
 4    (F2 + F4 + F5 + F6 - 4 F7 - F3) / 4         F = F4 = F5, f(xi) = 0
 5    (F2 + F4 - F5 - F6 - 4 F8 - F3) / 4         F = F4 = -F5, f*(xi) = 0
 6    (F2 - F4 + F5 - F6 - F3) / 4                F = -F4 = F5
 7    (F2 - F4 - F5 + F6 - F3) / 4                F = -F4 = -F5
 8    F1 - F3                                     hF = 0, F(x, y, xi) = 0
 9    F9(hF)                                      horizontal, Lee-form type
10    (F10 - F9)(hF)                              horizontal, Hermitian, f = 0
11    F11(hF)                                     horizontal, totally skew
12    (F12 - F11)(hF)                             horizontal, cyclic sum zero
====  =========================================  ===============================

Components 9 and 10 do not exist for n = 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .forms import DegenerateDimensionError, associated_form, h_form
from .structure import TAU_ALG, AcmStructure
from .tensors import (SV_CUTOFF, check_tensor, inner_product,
                      membership_residual, norm, random_element, require_frame,
                      space_basis, trace_f, trace_f_star, trace_omega)

COMPONENTS = tuple(range(1, 13))

# coefficients of forms 1..8 in p_1..p_8
_VERTICAL_COEFFS = {
    1: {3: 1.0},
    2: {7: 1.0},
    3: {8: 1.0},
    4: {2: 0.25, 4: 0.25, 5: 0.25, 6: 0.25, 7: -1.0, 3: -0.25},
    5: {2: 0.25, 4: 0.25, 5: -0.25, 6: -0.25, 8: -1.0, 3: -0.25},
    6: {2: 0.25, 4: -0.25, 5: 0.25, 6: -0.25, 3: -0.25},
    7: {2: 0.25, 4: -0.25, 5: -0.25, 6: 0.25, 3: -0.25},
    8: {1: 1.0, 3: -1.0},
}


class DomainViolation(ValueError):
    """An involution was applied outside the subspace it is defined on."""


def defined_components(n: int) -> tuple[int, ...]:
    return tuple(i for i in COMPONENTS if n >= 2 or i not in (9, 10))


def project(S: AcmStructure, i: int, F) -> np.ndarray:
    """The i-th component ``p_i(F)``."""
    require_frame(S)
    F = check_tensor(S, F)
    if i in _VERTICAL_COEFFS:
        out = np.zeros_like(F)
        for k, c in _VERTICAL_COEFFS[i].items():
            out = out + c * associated_form(S, k, F)
        return out
    if i in (9, 10) and S.n < 2:
        raise DegenerateDimensionError(
            f"degenerate horizontal dimension: component {i} needs n >= 2")
    if i == 9:
        return associated_form(S, 9, F)
    if i == 10:
        return associated_form(S, 10, F) - associated_form(S, 9, F)
    if i == 11:
        return associated_form(S, 11, F)
    if i == 12:
        return associated_form(S, 12, F) - associated_form(S, 11, F)
    raise ValueError(f"component index must be in 1..12, got {i}")


def vertical_part(S: AcmStructure, F) -> np.ndarray:
    """``vF = F1 + F2 - 2 F3``."""
    return (associated_form(S, 1, F) + associated_form(S, 2, F)
            - 2.0 * associated_form(S, 3, F))


def components(S: AcmStructure, F) -> dict[int, np.ndarray]:
    return {i: project(S, i, F) for i in defined_components(S.n)}


@dataclass(frozen=True)
class ComponentSpectrum:
    """Norms of the 12 components; ``None`` marks a component absent for n = 1."""

    n: int
    norms: tuple
    residual: float
    membership: float

    @property
    def total_norm(self) -> float:
        return float(np.sqrt(sum(x * x for x in self.norms if x is not None)))

    def to_json(self) -> dict:
        return {"n": self.n, "norms": list(self.norms), "residual": self.residual,
                "membership": self.membership}


class NotInSpaceError(ValueError):
    pass


def spectrum(S: AcmStructure, F, tol: float = TAU_ALG) -> ComponentSpectrum:
    """Component norms of ``F``.

    ``tol`` bounds the admissible membership residual; inputs from finite
    differences pass a looser value.
    """
    F = check_tensor(S, F)
    memb = membership_residual(S, F)
    if memb > tol:
        raise NotInSpaceError(f"not in constraint space (residual {memb:.3e} > {tol:.1e})")
    comps = components(S, F)
    norms = tuple(norm(comps[i]) if i in comps else None for i in COMPONENTS)
    rest = F - sum(comps.values())
    return ComponentSpectrum(n=S.n, norms=norms, residual=norm(rest), membership=memb)


def spectrum_from_json(obj: dict) -> ComponentSpectrum:
    norms = obj["norms"]
    if len(norms) != 12:
        raise ValueError("spectrum needs 12 norms")
    return ComponentSpectrum(n=int(obj["n"]), norms=tuple(norms),
                             residual=float(obj["residual"]),
                             membership=float(obj["membership"]))


# ---------------------------------------------------------------- involutions

def _maxabs(a) -> float:
    return float(np.max(np.abs(a))) if np.size(a) else 0.0


def _cond_in_space(S, F):
    return membership_residual(S, F)


def _cond_omega_zero(S, F):
    return _maxabs(trace_omega(S, F))


def _cond_h_zero(S, F):
    return _maxabs(h_form(S, F))


def _cond_xi_first_zero(S, F):
    return _maxabs(np.einsum("a,ajk->jk", S.xi, F))


def _cond_fixed_by(k, sign=1.0):
    def cond(S, F):
        return _maxabs(F - sign * associated_form(S, k, F))
    return cond


# named defining conditions of each involution's domain
INVOLUTION_DOMAINS = {
    1: [("F in constraint space", _cond_in_space)],
    2: [("F in constraint space", _cond_in_space),
        ("omega(F)=0", _cond_omega_zero)],
    3: [("F in constraint space", _cond_in_space),
        ("hF=0", _cond_h_zero), ("omega(F)=0", _cond_omega_zero)],
    4: [("F in constraint space", _cond_in_space),
        ("hF=0", _cond_h_zero), ("F(xi,y,z)=0", _cond_xi_first_zero)],
    6: [("F in constraint space", _cond_in_space),
        ("F=F4(F)", _cond_fixed_by(4)), ("F=F5(F)", _cond_fixed_by(5))],
    7: [("F in constraint space", _cond_in_space),
        ("F=F4(F)", _cond_fixed_by(4)), ("F=-F5(F)", _cond_fixed_by(5, -1.0))],
}


def involution_domain_check(S: AcmStructure, k: int, F, tol: float = TAU_ALG) -> None:
    """Raise ``DomainViolation`` naming the first failed defining condition."""
    scale = max(1.0, norm(F))
    if k == 5:
        base = _cond_in_space(S, F)
        if base > tol * scale:
            raise DomainViolation(f"domain violation for L5: F in constraint space "
                                  f"(residual {base:.3e})")
        plus = _cond_fixed_by(4)(S, F)
        minus = _cond_fixed_by(4, -1.0)(S, F)
        if min(plus, minus) > tol * scale:
            raise DomainViolation(f"domain violation for L5: F=F4(F) or F=-F4(F) "
                                  f"(residual {min(plus, minus):.3e})")
        return
    if k not in INVOLUTION_DOMAINS:
        raise ValueError(f"involution index must be in 1..7, got {k}")
    for name, cond in INVOLUTION_DOMAINS[k]:
        r = cond(S, F)
        if r > tol * scale:
            raise DomainViolation(f"domain violation for L{k}: {name} (residual {r:.3e})")


def involution(S: AcmStructure, k: int, F, tol: float = TAU_ALG) -> np.ndarray:
    """Apply the involutive isometry ``L_k`` after checking its domain."""
    require_frame(S)
    F = check_tensor(S, F)
    involution_domain_check(S, k, F, tol)
    A = lambda i: associated_form(S, i, F)  # noqa: E731
    if k == 1:
        return F - 2.0 * A(3)
    if k == 2:
        return F - 2.0 * (A(1) + A(2))
    if k == 3:
        return A(2) - A(1)
    if k == 4:
        return -A(4)
    if k == 5:
        return -A(5)
    if k == 6:
        return F - 2.0 * A(7)
    return F - 2.0 * A(8)


def eigen_split(S: AcmStructure, k: int, F, tol: float = TAU_ALG):
    """``(F+, F-) = ((F + LF)/2, (F - LF)/2)`` for ``L = L_k``."""
    LF = involution(S, k, F, tol)
    return 0.5 * (F + LF), 0.5 * (F - LF)


# ------------------------------------------------------------ subspace oracle

class RankNotStabilized(RuntimeError):
    pass


@dataclass(frozen=True)
class SubspaceBasis:
    i: int
    vectors: np.ndarray  # (dim, d, d, d), orthonormal under inner_product

    @property
    def dimension(self) -> int:
        return self.vectors.shape[0]

    def project(self, F) -> np.ndarray:
        """Gram projection: ``sum_b <F, b> b`` over the orthonormal basis."""
        F = np.asarray(F, dtype=np.float64)
        if self.dimension == 0:
            return np.zeros_like(F)
        coeffs = np.tensordot(self.vectors, F, axes=3)
        return np.tensordot(coeffs, self.vectors, axes=1)


def _orthonormal_span(samples: np.ndarray):
    """Orthonormal basis of the span of flattened samples, by SVD."""
    u, s, _ = np.linalg.svd(samples.T, full_matrices=False)
    if s.size == 0 or s[0] <= TAU_ALG:
        return u[:, :0]
    r = int(np.sum(s > SV_CUTOFF * s[0]))
    return u[:, :r]


def subspace_basis_oracle(S: AcmStructure, i: int, seeds, margin: int = 5) -> SubspaceBasis:
    """Orthonormal basis of the image of ``p_i``, sampled on random elements.

    The rank must stop growing over the last ``margin`` seeds, otherwise
    ``RankNotStabilized`` asks for more seeds.
    """
    seeds = list(seeds)
    if len(seeds) <= margin:
        raise RankNotStabilized(f"need more than {margin} seeds")
    d = S.dim
    samples = np.stack([project(S, i, random_element(S, s)).ravel() for s in seeds])
    full = _orthonormal_span(samples)
    head = _orthonormal_span(samples[:-margin])
    if full.shape[1] != head.shape[1]:
        raise RankNotStabilized(
            f"component {i}: rank grew from {head.shape[1]} to {full.shape[1]} "
            f"in the last {margin} seeds; supply more seeds")
    vectors = full.T.reshape(full.shape[1], d, d, d)
    return SubspaceBasis(i=i, vectors=vectors)


def sample_rank(tensors) -> int:
    """Numerical rank of a list of tensors (Gram matrix cutoff as elsewhere)."""
    arr = np.stack([np.asarray(t).ravel() for t in tensors])
    return _orthonormal_span(arr).shape[1]


def gram_matrix(tensors) -> np.ndarray:
    arr = np.stack([np.asarray(t).ravel() for t in tensors])
    return arr @ arr.T


def horizontal_dimension(S: AcmStructure) -> int:
    """Dimension of the horizontal part, as the rank of ``h`` on the space basis."""
    d = S.dim
    N = space_basis(S)
    if N.shape[1] == 0:
        return 0
    return sample_rank([h_form(S, v.reshape(d, d, d)) for v in N.T])


def component_traces(S: AcmStructure, F) -> dict[str, np.ndarray]:
    return {"f": trace_f(S, F), "f_star": trace_f_star(S, F), "omega": trace_omega(S, F)}


def orthogonality_matrix(S: AcmStructure, F, G) -> np.ndarray:
    """``M[i, j] = <p_i(F), p_j(G)>`` over defined components (None-free)."""
    idx = defined_components(S.n)
    pf = [project(S, i, F) for i in idx]
    pg = [project(S, j, G) for j in idx]
    return np.array([[inner_product(a, b) for b in pg] for a in pf])
