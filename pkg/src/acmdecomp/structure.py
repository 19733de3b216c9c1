"""Almost contact metric structures on a finite-dimensional real vector space.

A structure is the quadruple ``(phi, xi, eta, g)`` on ``R^(2n+1)``.  Matrices act
on column vectors, so ``phi[:, j]`` holds the components of ``phi(e_j)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

TAU_ALG = 1e-9

AXIOMS = (
    "phi^2=-id+eta*xi",
    "phi(xi)=0",
    "eta(phi)=0",
    "g(xi,xi)=1",
    "g(phi x,phi y)=g(x,y)-eta(x)eta(y)",
    "eta=g(.,xi)",
)


@dataclass(frozen=True, eq=False)
class AcmStructure:
    n: int
    phi: np.ndarray
    xi: np.ndarray
    eta: np.ndarray
    g: np.ndarray

    def __post_init__(self):
        if int(self.n) < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        d = 2 * int(self.n) + 1
        for name, arr, shape in (
            ("phi", self.phi, (d, d)),
            ("xi", self.xi, (d,)),
            ("eta", self.eta, (d,)),
            ("g", self.g, (d, d)),
        ):
            a = np.array(arr, dtype=np.float64)
            if a.shape != shape:
                raise ValueError(f"{name} has shape {a.shape}, expected {shape}")
            a.setflags(write=False)
            object.__setattr__(self, name, a)
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "orthonormal", self.is_orthonormal())

    @property
    def dim(self) -> int:
        return 2 * self.n + 1

    def key(self) -> bytes:
        """Hashable fingerprint used for caching derived linear algebra."""
        return b"".join(a.tobytes() for a in (self.phi, self.xi, self.eta, self.g))

    def is_orthonormal(self, tol: float = TAU_ALG) -> bool:
        return bool(np.max(np.abs(self.g - np.eye(self.dim))) <= tol)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "phi": self.phi.tolist(),
            "xi": self.xi.tolist(),
            "eta": self.eta.tolist(),
            "g": self.g.tolist(),
        }


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    max_residual: float
    violated_axioms: list[str] = field(default_factory=list)
    residuals: dict[str, float] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "max_residual": self.max_residual,
            "violated_axioms": list(self.violated_axioms),
            "residuals": dict(self.residuals),
        }


def standard_structure(n: int) -> AcmStructure:
    """The model structure: ``phi e_{2i-1} = e_{2i}``, ``xi = e_{2n+1}``, ``g = I``."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    d = 2 * n + 1
    phi = np.zeros((d, d))
    for i in range(n):
        a, b = 2 * i, 2 * i + 1
        phi[b, a] = 1.0
        phi[a, b] = -1.0
    xi = np.zeros(d)
    xi[-1] = 1.0
    return AcmStructure(n=n, phi=phi, xi=xi, eta=xi.copy(), g=np.eye(d))


def axiom_residuals(S: AcmStructure) -> dict[str, float]:
    phi, xi, eta, g = S.phi, S.xi, S.eta, S.g
    eye = np.eye(S.dim)
    return {
        AXIOMS[0]: float(np.max(np.abs(phi @ phi + eye - np.outer(xi, eta)))),
        AXIOMS[1]: float(np.max(np.abs(phi @ xi))),
        AXIOMS[2]: float(np.max(np.abs(eta @ phi))),
        AXIOMS[3]: float(abs(xi @ g @ xi - 1.0)),
        AXIOMS[4]: float(np.max(np.abs(phi.T @ g @ phi - g + np.outer(eta, eta)))),
        AXIOMS[5]: float(np.max(np.abs(g @ xi - eta))),
    }


def validate_structure(S: AcmStructure, tol: float = TAU_ALG) -> ValidationReport:
    """Evaluate every axiom on all basis vectors (pairs) and report violations.

    A non-symmetric or indefinite metric is reported as a violation of the
    compatibility axiom, since the metric must be a definite inner product.
    """
    res = axiom_residuals(S)
    asym = float(np.max(np.abs(S.g - S.g.T)))
    res[AXIOMS[4]] = max(res[AXIOMS[4]], asym)
    if np.min(np.linalg.eigvalsh(0.5 * (S.g + S.g.T))) <= 0.0:
        res[AXIOMS[4]] = max(res[AXIOMS[4]], np.inf)
    worst = max(res.values())
    violated = [name for name in AXIOMS if res[name] > tol]
    return ValidationReport(ok=worst <= tol, max_residual=worst,
                            violated_axioms=violated, residuals=res)


def h_matrix(S: AcmStructure) -> np.ndarray:
    """Matrix of ``h = -phi^2``."""
    return -S.phi @ S.phi


def h_map(S: AcmStructure, x) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (S.dim,):
        raise ValueError(f"vector has shape {x.shape}, expected ({S.dim},)")
    return h_matrix(S) @ x


def orthonormal_frame(g, xi, tol: float = 1e-12) -> np.ndarray:
    """Columns form a g-orthonormal basis whose last vector is ``xi``.

    Gram-Schmidt over the coordinate basis after removing the ``xi`` component;
    ``xi`` itself is normalized and pinned to the final slot.
    """
    g = np.asarray(g, dtype=np.float64)
    xi = np.asarray(xi, dtype=np.float64)
    d = len(xi)
    norm_xi = np.sqrt(xi @ g @ xi)
    if not norm_xi > 0:
        raise ValueError("xi has zero length")
    xi = xi / norm_xi
    basis: list[np.ndarray] = []
    for j in range(d):
        v = np.zeros(d)
        v[j] = 1.0
        v = v - (xi @ g @ v) * xi
        for b in basis:
            v = v - (b @ g @ v) * b
        nv = np.sqrt(max(v @ g @ v, 0.0))
        if nv > tol:
            basis.append(v / nv)
        if len(basis) == d - 1:
            break
    if len(basis) != d - 1:
        raise ValueError("metric is degenerate; cannot build an orthonormal frame")
    return np.column_stack(basis + [xi])


def adapted_frame(g, phi, xi) -> np.ndarray:
    """Orthonormal frame ``(u_1, phi u_1, ..., u_n, phi u_n, xi)``."""
    E = orthonormal_frame(g, xi)
    g = np.asarray(g, dtype=np.float64)
    phi = np.asarray(phi, dtype=np.float64)
    d = E.shape[0]
    cols: list[np.ndarray] = []
    for j in range(d - 1):
        v = E[:, j].copy()
        for c in cols:
            v = v - (c @ g @ v) * c
        nv = np.sqrt(max(v @ g @ v, 0.0))
        if nv <= 1e-8:
            continue
        u = v / nv
        cols.extend([u, phi @ u])
        if len(cols) == d - 1:
            break
    return np.column_stack(cols + [E[:, -1]])


def in_frame(S: AcmStructure, E: np.ndarray) -> AcmStructure:
    """Express ``S`` in the basis given by the columns of ``E``."""
    Einv = np.linalg.inv(E)
    return AcmStructure(
        n=S.n,
        phi=Einv @ S.phi @ E,
        xi=Einv @ S.xi,
        eta=S.eta @ E,
        g=E.T @ S.g @ E,
    )


def normalize(S: AcmStructure) -> tuple[AcmStructure, np.ndarray]:
    """Return ``S`` in a g-orthonormal frame with ``xi`` last, plus that frame."""
    E = orthonormal_frame(S.g, S.xi)
    return in_frame(S, E), E


def structure_from_json(obj: dict) -> AcmStructure:
    """Parse a structure object; omitted fields default to the standard model.

    The result is validated in the given basis and then re-expressed in an
    orthonormal frame with ``xi`` last.  Raises ``ValueError`` on malformed input
    or failed validation.
    """
    if not isinstance(obj, dict) or "n" not in obj:
        raise ValueError("structure object needs an integer field 'n'")
    n = obj["n"]
    if not isinstance(n, int) or isinstance(n, bool):
        raise ValueError("'n' must be an integer")
    base = standard_structure(n)
    S = AcmStructure(
        n=n,
        phi=obj.get("phi", base.phi),
        xi=obj.get("xi", base.xi),
        eta=obj.get("eta", base.eta),
        g=obj.get("g", base.g),
    )
    report = validate_structure(S)
    if not report.ok:
        raise ValueError(f"structure fails axioms: {', '.join(report.violated_axioms)}")
    return normalize(S)[0]
