"""(0,3)-tensors over an almost contact metric space and the constraint space.

Tensors are dense ``(d, d, d)`` float arrays with ``d = 2n + 1`` and entry
``[i, j, k] = F(e_i, e_j, e_k)`` in a g-orthonormal frame of the structure.
Every function here accepts arbitrary tensors; membership in the constraint
space is a residual test, not a type.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .structure import TAU_ALG, AcmStructure

SV_CUTOFF = 1e-8

_NULL_SPACE_CACHE: dict[bytes, np.ndarray] = {}


def require_frame(S: AcmStructure) -> None:
    if not S.orthonormal:
        raise ValueError("structure must be expressed in a g-orthonormal frame; "
                         "use structure.normalize first")


def check_tensor(S: AcmStructure, F) -> np.ndarray:
    F = np.asarray(F, dtype=np.float64)
    d = S.dim
    if F.shape[-3:] != (d, d, d):
        raise ValueError(f"tensor has shape {F.shape}, expected (..., {d}, {d}, {d})")
    return F


def zero(S: AcmStructure) -> np.ndarray:
    return np.zeros((S.dim,) * 3)


def inner_product(A, B) -> float:
    A = np.asarray(A, dtype=np.float64)
    B = np.asarray(B, dtype=np.float64)
    if A.shape != B.shape or A.ndim != 3:
        raise ValueError(f"shape mismatch: {A.shape} vs {B.shape}")
    return float(np.dot(A.ravel(), B.ravel()))


def norm(A) -> float:
    return float(np.sqrt(inner_product(A, A)))


@dataclass(frozen=True)
class TraceTriple:
    f: np.ndarray
    f_star: np.ndarray
    omega: np.ndarray


def trace_f(S: AcmStructure, F) -> np.ndarray:
    """``f(F)(z) = sum_i F(e_i, e_i, z)``."""
    return np.einsum("...iik->...k", F)


def trace_f_star(S: AcmStructure, F) -> np.ndarray:
    """``f*(F)(z) = sum_i F(e_i, phi e_i, z)``."""
    return np.einsum("ai,...iak->...k", S.phi, F)


def trace_omega(S: AcmStructure, F) -> np.ndarray:
    """``omega(F)(z) = F(xi, xi, z)``."""
    return np.einsum("a,b,...abk->...k", S.xi, S.xi, F)


def traces(S: AcmStructure, F) -> TraceTriple:
    require_frame(S)
    F = check_tensor(S, F)
    return TraceTriple(f=trace_f(S, F), f_star=trace_f_star(S, F),
                       omega=trace_omega(S, F))


def pull_back(M, F) -> np.ndarray:
    """``F(Mx, My, Mz)``: ``out[i,j,k] = sum M[a,i] M[b,j] M[c,k] F[a,b,c]``."""
    out = np.tensordot(F, M, axes=([-1], [0]))
    out = np.moveaxis(np.tensordot(out, M, axes=([-2], [0])), -1, -2)
    return np.moveaxis(np.tensordot(out, M, axes=([-3], [0])), -1, -3)


def phi_pull(S: AcmStructure, F, slots) -> np.ndarray:
    """Pre-compose the listed slots (0, 1, 2) of ``F`` with ``phi``."""
    out = F
    P = S.phi
    if 0 in slots:
        out = np.einsum("ai,...ajk->...ijk", P, out)
    if 1 in slots:
        out = np.einsum("aj,...iak->...ijk", P, out)
    if 2 in slots:
        out = np.einsum("ak,...ija->...ijk", P, out)
    return out


def constraint_map(S: AcmStructure, F) -> tuple[np.ndarray, np.ndarray]:
    """Violations of the two defining identities, entrywise over basis triples.

    First: ``F(x,y,z) + F(x,z,y)``.  Second:
    ``F(x,y,z) + F(x,phi y,phi z) - eta(y)F(x,xi,z) - eta(z)F(x,y,xi)``.
    Both are linear in ``F`` and accept a leading batch axis.
    """
    antisym = F + np.swapaxes(F, -1, -2)
    F_y_xi = np.einsum("...iak,a->...ik", F, S.xi)
    F_z_xi = np.einsum("...ija,a->...ij", F, S.xi)
    twisted = (F + phi_pull(S, F, (1, 2))
               - np.einsum("j,...ik->...ijk", S.eta, F_y_xi)
               - np.einsum("k,...ij->...ijk", S.eta, F_z_xi))
    return antisym, twisted


def membership_residuals(S: AcmStructure, F) -> tuple[float, float]:
    require_frame(S)
    F = check_tensor(S, F)
    a, t = constraint_map(S, F)
    return float(np.max(np.abs(a))), float(np.max(np.abs(t)))


def membership_residual(S: AcmStructure, F) -> float:
    return max(membership_residuals(S, F))


def is_member(S: AcmStructure, F, tol: float = TAU_ALG) -> bool:
    return membership_residual(S, F) <= tol


def constraint_matrix(S: AcmStructure) -> np.ndarray:
    """Matrix of ``constraint_map`` acting on flattened tensors (row-major)."""
    require_frame(S)
    d = S.dim
    basis = np.eye(d ** 3).reshape(d ** 3, d, d, d)
    a, t = constraint_map(S, basis)
    # row r of the batch is the image of basis tensor r, i.e. column r
    return np.concatenate([a.reshape(d ** 3, -1), t.reshape(d ** 3, -1)], axis=1).T


def space_basis(S: AcmStructure) -> np.ndarray:
    """Orthonormal basis of the constraint space, shape ``(d**3, dim)``.

    Null space of the constraint matrix from an SVD, with singular values below
    ``SV_CUTOFF * s_max`` treated as zero.
    """
    key = S.key()
    cached = _NULL_SPACE_CACHE.get(key)
    if cached is not None:
        return cached
    C = constraint_matrix(S)
    _, s, vt = np.linalg.svd(C)
    rank = int(np.sum(s > SV_CUTOFF * s[0]))
    N = vt[rank:].T.copy()
    N.setflags(write=False)
    _NULL_SPACE_CACHE[key] = N
    return N


def space_dimension(S: AcmStructure) -> int:
    return space_basis(S).shape[1]


def project_to_space(S: AcmStructure, T) -> np.ndarray:
    """Orthogonal projection onto the constraint space."""
    T = check_tensor(S, T)
    N = space_basis(S)
    d = S.dim
    flat = T.reshape(*T.shape[:-3], d ** 3)
    return ((flat @ N) @ N.T).reshape(T.shape)


def random_tensor(S: AcmStructure, rng: np.random.Generator) -> np.ndarray:
    return rng.standard_normal((S.dim,) * 3)


def random_element(S: AcmStructure, seed: int) -> np.ndarray:
    """Deterministic standard-normal tensor projected onto the constraint space."""
    rng = np.random.default_rng(seed)
    return project_to_space(S, random_tensor(S, rng))


def tensor_to_json(F) -> dict:
    F = np.asarray(F, dtype=np.float64)
    d = F.shape[0]
    return {"n": (d - 1) // 2, "values": F.tolist()}


def tensor_from_json(obj: dict) -> tuple[int, np.ndarray]:
    if not isinstance(obj, dict) or "n" not in obj or "values" not in obj:
        raise ValueError("tensor object needs fields 'n' and 'values'")
    n = obj["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValueError("'n' must be a positive integer")
    try:
        values = np.array(obj["values"], dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"'values' is not a numeric array: {exc}") from None
    d = 2 * n + 1
    if values.shape != (d, d, d):
        raise ValueError(f"'values' has shape {values.shape}, expected ({d}, {d}, {d})")
    return n, values
