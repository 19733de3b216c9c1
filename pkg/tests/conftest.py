import itertools

import numpy as np
import pytest

from acmdecomp.structure import standard_structure

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(params=[1, 2, 3], ids=lambda n: f"n{n}")
def S(request):
    return standard_structure(request.param)


@pytest.fixture
def S2():
    return standard_structure(2)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


class Reference:
    """Slow, literal evaluation of the associated forms on basis vectors.

    Everything is written as multilinear evaluation ``F(x, y, z)`` on vectors,
    transcribing each formula term by term, so it shares no contraction code
    with the package.
    """

    def __init__(self, S, F):
        self.S = S
        self.F = np.asarray(F)
        self.d = S.dim
        self.basis = list(np.eye(self.d))

    def ev(self, T, x, y, z):
        return float(np.einsum("abc,a,b,c->", T, x, y, z))

    def eta(self, x):
        return float(self.S.eta @ x)

    def g(self, x, y):
        return float(x @ y)

    def phi(self, x):
        return self.S.phi @ x

    def h(self, x):
        return x - self.eta(x) * self.S.xi

    def tabulate(self, func):
        out = np.zeros((self.d,) * 3)
        for i, j, k in itertools.product(range(self.d), repeat=3):
            out[i, j, k] = func(self.basis[i], self.basis[j], self.basis[k])
        return out

    def f(self, T, z):
        return sum(self.ev(T, e, e, z) for e in self.basis)

    def f_star(self, T, z):
        return sum(self.ev(T, e, self.phi(e), z) for e in self.basis)

    def omega(self, T, z):
        xi = self.S.xi
        return self.ev(T, xi, xi, z)

    def form(self, i):
        F, xi, n = self.F, self.S.xi, self.S.n
        ev, eta, g, phi, h = self.ev, self.eta, self.g, self.phi, self.h
        if i == 1:
            return self.tabulate(lambda x, y, z: eta(x) * ev(F, xi, y, z))
        if i == 2:
            return self.tabulate(lambda x, y, z: eta(y) * ev(F, x, xi, z) - eta(z) * ev(F, x, xi, y))
        if i == 3:
            return self.tabulate(lambda x, y, z: eta(x) * eta(y) * ev(F, xi, xi, z)
                                 - eta(x) * eta(z) * ev(F, xi, xi, y))
        if i == 4:
            return self.tabulate(lambda x, y, z: eta(y) * ev(F, phi(x), xi, phi(z))
                                 - eta(z) * ev(F, phi(x), xi, phi(y)))
        if i == 5:
            return self.tabulate(lambda x, y, z: eta(y) * ev(F, z, xi, x) - eta(z) * ev(F, y, xi, x))
        if i == 6:
            return self.tabulate(lambda x, y, z: eta(y) * ev(F, phi(z), xi, phi(x))
                                 - eta(z) * ev(F, phi(y), xi, phi(x)))
        if i == 7:
            c = self.f(F, xi) / (2 * n)
            return self.tabulate(lambda x, y, z: c * (eta(z) * g(x, y) - eta(y) * g(x, z)))
        if i == 8:
            c = -self.f_star(F, xi) / (2 * n)
            return self.tabulate(lambda x, y, z: c * (eta(z) * g(x, phi(y)) - eta(y) * g(x, phi(z))))
        hF = self.tabulate(lambda x, y, z: ev(F, h(x), h(y), h(z)))
        if i == 9:
            c = 1.0 / (2 * (n - 1))
            fv = lambda v: self.f(hF, v)  # noqa: E731
            return self.tabulate(lambda x, y, z: c * (
                g(h(x), h(y)) * fv(z) - g(h(x), h(z)) * fv(y)
                - g(x, phi(y)) * fv(phi(z)) + g(x, phi(z)) * fv(phi(y))))
        if i == 10:
            return self.tabulate(lambda x, y, z: 0.5 * (ev(hF, x, y, z) + ev(hF, phi(x), phi(y), z)))
        if i == 11:
            return self.tabulate(lambda x, y, z: (
                ev(hF, x, y, z) + ev(hF, y, z, x) + ev(hF, z, x, y)
                - ev(hF, phi(x), phi(y), z) - ev(hF, phi(y), phi(z), x)
                - ev(hF, phi(z), phi(x), y)) / 6.0)
        if i == 12:
            return self.tabulate(lambda x, y, z: 0.5 * (ev(hF, x, y, z) - ev(hF, phi(x), phi(y), z)))
        if i == "h":
            return hF
        raise KeyError(i)


@pytest.fixture
def reference():
    return Reference


def brute_force_constraint_rank(S):
    """dim of the constraint space from rows written out triple by triple."""
    d = S.dim
    P, xi, eta = S.phi, S.xi, S.eta
    idx = lambda i, j, k: (i * d + j) * d + k  # noqa: E731
    rows = []
    for i, j, k in itertools.product(range(d), repeat=3):
        r = np.zeros(d ** 3)
        r[idx(i, j, k)] += 1.0
        r[idx(i, k, j)] += 1.0
        rows.append(r)
        r = np.zeros(d ** 3)
        r[idx(i, j, k)] += 1.0
        # + F(e_i, phi e_j, phi e_k)
        for a in range(d):
            for b in range(d):
                r[idx(i, a, b)] += P[a, j] * P[b, k]
        for a in range(d):
            r[idx(i, a, k)] -= eta[j] * xi[a]
            r[idx(i, j, a)] -= eta[k] * xi[a]
        rows.append(r)
    A = np.array(rows)
    s = np.linalg.svd(A, compute_uv=False)
    return d ** 3 - int(np.sum(s > 1e-8 * s[0]))
