"""Random elements of U(n)x1 and their action on (0,3)-tensors."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .structure import TAU_ALG, AcmStructure, h_matrix
from .tensors import pull_back, require_frame


@dataclass(frozen=True)
class StructureIsometry:
    a: np.ndarray

    def inverse(self) -> "StructureIsometry":
        return StructureIsometry(np.linalg.inv(self.a))

    def __matmul__(self, other: "StructureIsometry") -> "StructureIsometry":
        return StructureIsometry(self.a @ other.a)


def unitary_generator(S: AcmStructure, A) -> np.ndarray:
    """Project a matrix onto skew maps of the horizontal space commuting with phi.

    ``A -> (K - phi K phi) / 2`` with ``K`` the skew part of ``hAh``; the
    result annihilates ``xi``.
    """
    H = h_matrix(S)
    K = H @ np.asarray(A, dtype=np.float64) @ H
    K = 0.5 * (K - K.T)
    return 0.5 * (K - S.phi @ K @ S.phi)


def isometry_from_generator(S: AcmStructure, X) -> StructureIsometry:
    return StructureIsometry(expm(np.asarray(X, dtype=np.float64)))


def random_isometry(S: AcmStructure, seed: int, scale: float = 1.0) -> StructureIsometry:
    require_frame(S)
    rng = np.random.default_rng(seed)
    X = unitary_generator(S, scale * rng.standard_normal((S.dim, S.dim)))
    return isometry_from_generator(S, X)


def isometry_residuals(S: AcmStructure, iso: StructureIsometry) -> dict[str, float]:
    a = iso.a
    return {
        "a(xi)=xi": float(np.max(np.abs(a @ S.xi - S.xi))),
        "a phi = phi a": float(np.max(np.abs(a @ S.phi - S.phi @ a))),
        "a^T g a = g": float(np.max(np.abs(a.T @ S.g @ a - S.g))),
    }


def is_structure_isometry(S: AcmStructure, iso: StructureIsometry, tol: float = TAU_ALG) -> bool:
    return max(isometry_residuals(S, iso).values()) <= tol


def act(iso: StructureIsometry, F) -> np.ndarray:
    """``(a.F)(x, y, z) = F(a^-1 x, a^-1 y, a^-1 z)``."""
    F = np.asarray(F, dtype=np.float64)
    return pull_back(np.linalg.inv(iso.a), F)


def act_covector(iso: StructureIsometry, c) -> np.ndarray:
    """``c o a^-1``."""
    return np.asarray(c, dtype=np.float64) @ np.linalg.inv(iso.a)


def random_frame_change(S: AcmStructure, seed: int) -> np.ndarray:
    """Random orthogonal matrix fixing ``xi`` (not necessarily commuting with phi).

    Used to re-express a structure in another orthonormal frame with ``xi`` last.
    """
    require_frame(S)
    rng = np.random.default_rng(seed)
    H = h_matrix(S)
    K = H @ rng.standard_normal((S.dim, S.dim)) @ H
    return expm(K - K.T)

