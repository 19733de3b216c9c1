"""Pointwise F(x, y, z) = g((nabla_x phi) y, z) on charts, by central differences.

Charts are closed-form callbacks returning the coordinate components of
``g``, ``phi``, ``xi`` and ``eta`` at a point.  Index conventions:
``gamma[k, i, j]`` is the Christoffel symbol of the second kind, and
``phi[k, j]`` the k-th component of ``phi(d_j)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .structure import AcmStructure, adapted_frame, in_frame, orthonormal_frame, validate_structure
from .tensors import pull_back

TAU_GEO = 1e-5
DEFAULT_STEP = 1e-5


class StructureValidationError(ValueError):
    pass


@dataclass(frozen=True)
class ChartField:
    name: str
    n: int
    g_at: Callable
    phi_at: Callable
    xi_at: Callable
    eta_at: Callable

    @property
    def dim(self) -> int:
        return 2 * self.n + 1

    def structure_at(self, p) -> AcmStructure:
        p = np.asarray(p, dtype=np.float64)
        return AcmStructure(n=self.n, phi=self.phi_at(p), xi=self.xi_at(p),
                            eta=self.eta_at(p), g=self.g_at(p))


@dataclass(frozen=True)
class PointFrame:
    point: np.ndarray
    frame: np.ndarray  # columns: g-orthonormal basis, xi last


def _partials(func, p, step):
    """``out[i, ...] = d_i func(p)`` by central differences."""
    p = np.asarray(p, dtype=np.float64)
    out = []
    for i in range(len(p)):
        dp = np.zeros_like(p)
        dp[i] = step
        out.append((np.asarray(func(p + dp)) - np.asarray(func(p - dp))) / (2 * step))
    return np.array(out)


def christoffel(chart: ChartField, p, step: float = DEFAULT_STEP) -> np.ndarray:
    """Levi-Civita symbols ``gamma[k, i, j]`` from central differences of g."""
    if not step > 0:
        raise ValueError("step must be positive")
    p = np.asarray(p, dtype=np.float64)
    g = np.asarray(chart.g_at(p), dtype=np.float64)
    if abs(np.linalg.det(g)) < 1e-14:
        raise np.linalg.LinAlgError(f"singular metric at {p.tolist()}")
    ginv = np.linalg.inv(g)
    dg = _partials(chart.g_at, p, step)  # dg[l, i, j] = d_l g_ij
    # lowered symbols: Gamma_{l,ij} = (d_i g_jl + d_j g_il - d_l g_ij) / 2
    low = 0.5 * (np.einsum("ijl->lij", dg) + np.einsum("jil->lij", dg) - dg)
    return np.einsum("kl,lij->kij", ginv, low)


def covariant_phi(chart: ChartField, p, step: float = DEFAULT_STEP) -> np.ndarray:
    """``D[i, k, j] = (nabla_i phi)^k_j``."""
    p = np.asarray(p, dtype=np.float64)
    phi = np.asarray(chart.phi_at(p), dtype=np.float64)
    gam = christoffel(chart, p, step)
    dphi = _partials(chart.phi_at, p, step)  # dphi[i, k, j]
    return (dphi + np.einsum("kil,lj->ikj", gam, phi)
            - np.einsum("lij,kl->ikj", gam, phi))


def point_frame(chart: ChartField, p, adapted: bool = False) -> PointFrame:
    p = np.asarray(p, dtype=np.float64)
    g = chart.g_at(p)
    if adapted:
        E = adapted_frame(g, chart.phi_at(p), chart.xi_at(p))
    else:
        E = orthonormal_frame(g, chart.xi_at(p))
    return PointFrame(point=p, frame=E)


def fundamental_F(chart: ChartField, p, step: float = DEFAULT_STEP,
                  adapted: bool = False, tol: float = TAU_GEO):
    """Tensor ``F`` at ``p`` in an orthonormal frame, with the structure there.

    Returns ``(S, F)`` where ``S`` is the pointwise structure expressed in the
    same frame, ready for the algebraic modules.
    """
    p = np.asarray(p, dtype=np.float64)
    if p.shape != (chart.dim,):
        raise ValueError(f"point needs {chart.dim} coordinates, got {p.shape}")
    S_coord = chart.structure_at(p)
    report = validate_structure(S_coord, tol=tol)
    if not report.ok:
        raise StructureValidationError(
            f"chart {chart.name} fails {', '.join(report.violated_axioms)} at {p.tolist()}")
    D = covariant_phi(chart, p, step)
    F_coord = np.einsum("mk,ikj->ijm", S_coord.g, D)
    E = point_frame(chart, p, adapted=adapted).frame
    F = pull_back(E, F_coord)
    return in_frame(S_coord, E), F


# ------------------------------------------------------------------ charts

def _standard_phi(n: int) -> np.ndarray:
    d = 2 * n + 1
    phi = np.zeros((d, d))
    for i in range(n):
        phi[2 * i + 1, 2 * i] = 1.0
        phi[2 * i, 2 * i + 1] = -1.0
    return phi


def cosymplectic_chart(n: int) -> ChartField:
    """Flat ``C^n x R`` with constant structure; coordinates ``(x1, y1, ..., t)``."""
    d = 2 * n + 1
    xi = np.zeros(d)
    xi[-1] = 1.0
    phi = _standard_phi(n)
    return ChartField(
        name=f"cosymplectic-n{n}", n=n,
        g_at=lambda p: np.eye(d), phi_at=lambda p: phi,
        xi_at=lambda p: xi, eta_at=lambda p: xi,
    )


def kenmotsu_chart(n: int) -> ChartField:
    """Warped product ``dt^2 + e^(2t) sum dx_i^2``; coordinates ``(t, x_1, ..., x_2n)``.

    ``phi`` pairs ``d_x(2i-1) -> d_x(2i)`` and kills ``d_t = xi``.
    """
    d = 2 * n + 1
    phi = np.zeros((d, d))
    phi[1:, 1:] = _standard_phi(n)[:-1, :-1]
    xi = np.zeros(d)
    xi[0] = 1.0

    def g_at(p):
        g = np.exp(2.0 * p[0]) * np.eye(d)
        g[0, 0] = 1.0
        return g

    return ChartField(name=f"kenmotsu-r{d}", n=n, g_at=g_at,
                      phi_at=lambda p: phi, xi_at=lambda p: xi, eta_at=lambda p: xi)


def sasakian_chart(n: int) -> ChartField:
    """Standard contact structure on ``R^(2n+1)``, coordinates ``(x_i, y_i, z)``.

    ``eta = (dz - sum y_i dx_i) / 2``, ``xi = 2 d_z``,
    ``g = eta (x) eta + sum (dx_i^2 + dy_i^2) / 4``.  ``phi`` maps the
    orthonormal horizontal pair ``X_i = 2(d_x_i + y_i d_z)``, ``Y_i = 2 d_y_i``
    as ``phi Y_i = X_i``, ``phi X_i = -Y_i``.
    """
    d = 2 * n + 1

    def eta_at(p):
        e = np.zeros(d)
        for i in range(n):
            e[2 * i] = -0.5 * p[2 * i + 1]
        e[-1] = 0.5
        return e

    def g_at(p):
        e = eta_at(p)
        g = np.outer(e, e)
        g[:-1, :-1] += 0.25 * np.eye(d - 1)
        return g

    def frame_at(p):
        cols = []
        for i in range(n):
            X = np.zeros(d)
            X[2 * i] = 2.0
            X[-1] = 2.0 * p[2 * i + 1]
            Y = np.zeros(d)
            Y[2 * i + 1] = 2.0
            cols.extend([Y, X])
        xi = np.zeros(d)
        xi[-1] = 2.0
        return np.column_stack(cols + [xi])

    J = _standard_phi(n)

    def phi_at(p):
        E = frame_at(p)
        return E @ J @ np.linalg.inv(E)

    def xi_at(p):
        xi = np.zeros(d)
        xi[-1] = 2.0
        return xi

    return ChartField(name=f"sasakian-r{d}", n=n, g_at=g_at, phi_at=phi_at,
                      xi_at=xi_at, eta_at=eta_at)


def builtin_charts() -> list[ChartField]:
    return [
        cosymplectic_chart(1),
        cosymplectic_chart(2),
        sasakian_chart(1),
        sasakian_chart(2),
        kenmotsu_chart(1),
        kenmotsu_chart(2),
    ]


def chart_by_name(name: str) -> ChartField:
    for chart in builtin_charts():
        if chart.name == name:
            return chart
    known = ", ".join(c.name for c in builtin_charts())
    raise KeyError(f"unknown chart {name!r}; choose one of: {known}")


def step_halving(chart: ChartField, p, step: float = 1e-3, tol: float = TAU_GEO) -> dict:
    """Compare component spectra at ``step``, ``step/2`` and ``step/4``.

    For a second-order scheme the change between ``step/2`` and ``step/4``
    should be about a quarter of the change between ``step`` and ``step/2``.
    ``estimate`` is that predicted change plus a rounding floor; the check
    passes when the observed change is within 4x of it.
    """
    from .decomposition import spectrum

    def vec(h):
        S, F = fundamental_F(chart, p, h, tol=tol)
        sp = spectrum(S, F, tol=tol)
        return np.array([x if x is not None else 0.0 for x in sp.norms]), F

    s1, F1 = vec(step)
    s2, _ = vec(step / 2)
    s4, _ = vec(step / 4)
    change_coarse = float(np.max(np.abs(s1 - s2)))
    change_fine = float(np.max(np.abs(s2 - s4)))
    floor = 1e3 * np.finfo(float).eps * max(1.0, float(np.max(np.abs(F1)))) / (step / 4)
    estimate = change_coarse / 4.0 + floor
    return {
        "step": step,
        "change_coarse": change_coarse,
        "change_fine": change_fine,
        "estimate": float(estimate),
        "ok": bool(change_fine <= 4.0 * estimate),
    }
