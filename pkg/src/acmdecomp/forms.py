"""Associated forms F_1 ... F_12 and the horizontal part hF.

Each form is a linear operator on (0,3)-tensors.  Forms 9-12 act on the
horizontal part: ``associated_form(S, 9, F)`` evaluates F_9 on ``hF``, so they
are defined on the whole constraint space and vanish on its vertical part.

Forms 9 and 10 carry the factor ``1/(2(n-1))`` and are undefined for n = 1.
"""

from __future__ import annotations

import numpy as np

from .structure import AcmStructure, h_matrix
from .tensors import (check_tensor, phi_pull, pull_back, require_frame, trace_f,
                      trace_f_star, trace_omega)


class DegenerateDimensionError(ValueError):
    """Raised for forms and components that do not exist when n = 1."""


FORM_INDICES = tuple(range(1, 13))


def _xi_middle(S: AcmStructure, F) -> np.ndarray:
    """``A[i, k] = F(e_i, xi, e_k)``."""
    return np.einsum("iak,a->ik", F, S.xi)


def _vertical_pair(S: AcmStructure, A) -> np.ndarray:
    """``eta(y) A(x, z) - eta(z) A(x, y)`` as a tensor in (x, y, z)."""
    e = S.eta
    return np.einsum("j,ik->ijk", e, A) - np.einsum("k,ij->ijk", e, A)


def metric_form(S: AcmStructure) -> np.ndarray:
    """``eta(z) g(x,y) - eta(y) g(x,z)``; spans the alpha-Sasakian line."""
    return _vertical_pair(S, np.eye(S.dim)) * -1.0


def twisted_form(S: AcmStructure) -> np.ndarray:
    """``eta(z) g(x,phi y) - eta(y) g(x,phi z)``; spans the alpha-Kenmotsu line."""
    return _vertical_pair(S, S.phi) * -1.0


def h_form(S: AcmStructure, F) -> np.ndarray:
    """``hF(x, y, z) = F(hx, hy, hz)``."""
    require_frame(S)
    F = check_tensor(S, F)
    return pull_back(h_matrix(S), F)


def form1(S, F):
    return np.einsum("i,jk->ijk", S.eta, np.einsum("a,ajk->jk", S.xi, F))


def form2(S, F):
    return _vertical_pair(S, _xi_middle(S, F))


def form3(S, F):
    w = trace_omega(S, F)
    e = S.eta
    return np.einsum("i,j,k->ijk", e, e, w) - np.einsum("i,k,j->ijk", e, e, w)


def _phi_xi_phi(S, F):
    """``B[i, k] = F(phi e_i, xi, phi e_k)``."""
    P = S.phi
    return P.T @ _xi_middle(S, F) @ P


def form4(S, F):
    return _vertical_pair(S, _phi_xi_phi(S, F))


def form5(S, F):
    # eta(y)F(z,xi,x) - eta(z)F(y,xi,x)
    return _vertical_pair(S, _xi_middle(S, F).T)


def form6(S, F):
    # eta(y)F(phi z,xi,phi x) - eta(z)F(phi y,xi,phi x)
    return _vertical_pair(S, _phi_xi_phi(S, F).T)


def form7(S, F):
    return trace_f(S, F) @ S.xi / (2 * S.n) * metric_form(S)


def form8(S, F):
    return -(trace_f_star(S, F) @ S.xi) / (2 * S.n) * twisted_form(S)


def lee_form(S: AcmStructure, covector) -> np.ndarray:
    """The F_9 expression built from a covector ``c`` (normally ``f(F)``).

    ``{g(hx,hy)c(z) - g(hx,hz)c(y) - g(x,phi y)c(phi z) + g(x,phi z)c(phi y)}
    / (2(n-1))``.
    """
    if S.n < 2:
        raise DegenerateDimensionError("degenerate horizontal dimension: "
                                       "F_9 and F_10 need n >= 2")
    H = h_matrix(S)
    gh = H.T @ H
    P = S.phi
    c = np.asarray(covector, dtype=np.float64)
    c_phi = c @ P
    out = (np.einsum("ij,k->ijk", gh, c) - np.einsum("ik,j->ijk", gh, c)
           - np.einsum("ij,k->ijk", P, c_phi) + np.einsum("ik,j->ijk", P, c_phi))
    return out / (2 * (S.n - 1))


def _form9_raw(S, F):
    return lee_form(S, trace_f(S, F))


def _form10_raw(S, F):
    if S.n < 2:
        raise DegenerateDimensionError("degenerate horizontal dimension: "
                                       "F_9 and F_10 need n >= 2")
    return 0.5 * (F + phi_pull(S, F, (0, 1)))


def _cyclic(F):
    """``F(x,y,z) + F(y,z,x) + F(z,x,y)``."""
    return F + np.einsum("jki->ijk", F) + np.einsum("kij->ijk", F)


def _form11_raw(S, F):
    return (_cyclic(F) - _cyclic(phi_pull(S, F, (0, 1)))) / 6.0


def _form12_raw(S, F):
    return 0.5 * (F - phi_pull(S, F, (0, 1)))


_VERTICAL = {1: form1, 2: form2, 3: form3, 4: form4, 5: form5, 6: form6,
             7: form7, 8: form8}
_HORIZONTAL = {9: _form9_raw, 10: _form10_raw, 11: _form11_raw, 12: _form12_raw}


def associated_form(S: AcmStructure, i: int, F) -> np.ndarray:
    """Evaluate the i-th associated form on ``F`` (i = 1 ... 12)."""
    require_frame(S)
    F = check_tensor(S, F)
    if i in _VERTICAL:
        return _VERTICAL[i](S, F)
    if i in _HORIZONTAL:
        if i in (9, 10) and S.n < 2:
            raise DegenerateDimensionError(
                f"degenerate horizontal dimension: F_{i} needs n >= 2")
        return _HORIZONTAL[i](S, h_form(S, F))
    raise ValueError(f"form index must be in 1..12, got {i}")


def defined_forms(n: int) -> tuple[int, ...]:
    return tuple(i for i in FORM_INDICES if n >= 2 or i not in (9, 10))


def compose(S: AcmStructure, i: int, j: int, F) -> np.ndarray:
    """``F_ij(F) = F_i(F_j(F))``."""
    return associated_form(S, i, associated_form(S, j, F))


# Composition relations, each as (label, lhs, rhs) over forms 1..8.  A term is
# a tuple of form indices applied right-to-left, with a coefficient; () is F.
# The F_8 row uses the signs forced by the trace table: F_4 fixes the twisted
# form and F_5 negates it.
def _composition_relations():
    rel = []

    def add(label, lhs, rhs):
        rel.append((label, lhs, rhs))

    table = {
        (1, 1): [(1, (1,))], (1, 2): [(1, (3,))], (1, 3): [(1, (3,))],
        (1, 4): [], (1, 5): [],
        (2, 1): [(1, (3,))], (2, 2): [(1, (2,))], (2, 3): [(1, (3,))],
        (2, 4): [(1, (4,))], (2, 5): [(1, (5,))],
        (3, 1): [(1, (3,))], (3, 2): [(1, (3,))], (3, 3): [(1, (3,))],
        (3, 4): [], (3, 5): [],
        (4, 1): [], (4, 2): [(1, (4,))], (4, 3): [],
        (4, 4): [(1, (2,)), (-1, (3,))], (4, 5): [(1, (6,))],
        (5, 1): [], (5, 2): [(1, (5,))], (5, 3): [],
        (5, 4): [(1, (6,))], (5, 5): [(1, (2,)), (-1, (3,))],
        (7, 1): [], (1, 7): [], (7, 3): [], (3, 7): [],
        (8, 1): [], (1, 8): [], (8, 3): [],
        (4, 8): [(1, (8,))], (8, 4): [(1, (8,))], (8, 8): [(1, (8,))],
        (5, 8): [(-1, (8,))], (8, 5): [(-1, (8,))],
    }
    for i in (2, 4, 5, 7):
        table[(7, i)] = [(1, (7,))]
        table[(i, 7)] = [(1, (7,))]
    for (i, j), rhs in table.items():
        add(f"F{i}{j}", [(1, (i, j))], rhs)
    for i in range(1, 9):
        add(f"h(F{i})", [(1, ("h", i))], [])
        add(f"F{i}(hF)", [(1, (i, "h"))], [])
    return rel


COMPOSITION_RELATIONS = _composition_relations()


def _apply_chain(S, chain, F):
    out = F
    for op in reversed(chain):
        out = h_form(S, out) if op == "h" else associated_form(S, op, out)
    return out


def _evaluate(S, terms, F):
    total = np.zeros_like(F)
    for coeff, chain in terms:
        total = total + coeff * _apply_chain(S, chain, F)
    return total


def composition_table_residuals(S: AcmStructure, F) -> dict[str, float]:
    """Max-abs residual of each composition relation evaluated on ``F``."""
    require_frame(S)
    F = check_tensor(S, F)
    return {label: float(np.max(np.abs(_evaluate(S, lhs, F) - _evaluate(S, rhs, F))))
            for label, lhs, rhs in COMPOSITION_RELATIONS}


def composition_table_residual(S: AcmStructure, F) -> float:
    return max(composition_table_residuals(S, F).values())


def trace_table_residuals(S: AcmStructure, F) -> dict[str, float]:
    """Residuals of the 24 trace identities (f, f*, omega of F_1 ... F_8)."""
    require_frame(S)
    F = check_tensor(S, F)
    f = trace_f(S, F)
    fs = trace_f_star(S, F)
    w = trace_omega(S, F)
    f_xi = f @ S.xi
    fs_xi = fs @ S.xi
    eta = S.eta
    zero = np.zeros(S.dim)
    expected = {
        1: (w, zero, w),
        2: (w + f_xi * eta, fs_xi * eta, w),
        3: (w, zero, w),
        4: (f_xi * eta, fs_xi * eta, zero),
        5: (f_xi * eta, -fs_xi * eta, zero),
        6: (f_xi * eta, -fs_xi * eta, zero),
        7: (f_xi * eta, zero, zero),
        8: (zero, fs_xi * eta, zero),
    }
    out = {}
    for i, (ef, efs, ew) in expected.items():
        Fi = associated_form(S, i, F)
        out[f"f(F{i})"] = float(np.max(np.abs(trace_f(S, Fi) - ef)))
        out[f"f*(F{i})"] = float(np.max(np.abs(trace_f_star(S, Fi) - efs)))
        out[f"omega(F{i})"] = float(np.max(np.abs(trace_omega(S, Fi) - ew)))
    return out


def trace_table_residual(S: AcmStructure, F) -> float:
    return max(trace_table_residuals(S, F).values())
