"""Independent reference computations used by the tests.

Nothing here imports the package under test.  There are two oracles:

* a floating-point discretization: every edge is cut into short segments,
  Green functions come from the pseudoinverse of the weighted graph
  Laplacian, and the invariants are evaluated from their integral
  definitions;
* exact closed forms on small graphs via a plain Gauss-Jordan solver.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np


def gauss_jordan(A, b):
    """Solve a square rational system by textbook Gauss-Jordan elimination."""
    n = len(A)
    M = [[Fraction(x) for x in A[i]] + [Fraction(b[i])] for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if M[r][col] != 0)
        M[col], M[piv] = M[piv], M[col]
        p = M[col][col]
        M[col] = [x / p for x in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [M[i][n] for i in range(n)]


def resistance(vertices, edges, a, b):
    """Exact effective resistance between vertices ``a`` and ``b`` (None if disconnected)."""
    if a == b:
        return Fraction(0)
    idx = {v: i for i, v in enumerate(vertices)}
    n = len(vertices)
    L = [[Fraction(0)] * n for _ in range(n)]
    for u, v, ell in edges:
        if u == v:
            continue
        w = 1 / Fraction(ell)
        i, j = idx[u], idx[v]
        L[i][i] += w
        L[j][j] += w
        L[i][j] -= w
        L[j][i] -= w
    # ground b, inject unit current at a
    keep = [i for i in range(n) if i != idx[b]]
    A = [[L[i][j] for j in keep] for i in keep]
    rhs = [Fraction(int(i == idx[a])) for i in keep]
    try:
        x = gauss_jordan(A, rhs)
    except StopIteration:
        return None
    return x[keep.index(idx[a])]


def canonical_measure_closed_form(vertices, edges, m):
    """Atoms and per-edge densities of the canonical measure of ``(graph, m)``.

    Uses ``mu_K = (delta_K + 2 mu_can) / (2g)`` with the classical measure
    ``mu_can = sum (1 - n_p/2) delta_p + sum dx / (l_e + R_e)``, where
    ``R_e`` is the resistance between the ends of ``e`` once ``e`` is
    removed (infinite for bridges).  Loops have ``R_e = 0``.
    """
    valence = {v: 0 for v in vertices}
    for u, v, _ in edges:
        valence[u] += 1
        valence[v] += 1
    K = {v: valence[v] + m.get(v, 0) - 2 for v in vertices}
    g = Fraction(sum(K.values()), 2) + 1
    atoms = {v: (K[v] + 2 - valence[v]) / (2 * g) for v in vertices}
    dens = []
    for i, (u, v, ell) in enumerate(edges):
        ell = Fraction(ell)
        if u == v:
            re = Fraction(0)
        else:
            rest = edges[:i] + edges[i + 1 :]
            re = resistance(vertices, rest, u, v)
        dens.append(Fraction(0) if re is None else 1 / (g * (ell + re)))
    return atoms, dens, int(g)


class Discretization:
    """Metrized graph cut into about ``N`` segments of nearly equal length."""

    def __init__(self, vertices, edges, N=2048):
        lengths = [float(Fraction(ell)) for _, _, ell in edges]
        total = sum(lengths)
        self.total = total
        self.nodes = list(vertices)
        index = {v: i for i, v in enumerate(vertices)}
        links = []  # (i, j, h)
        self.edge_nodes = []
        for (u, v, _), ell in zip(edges, lengths):
            k = max(2, round(N * ell / total))
            h = ell / k
            chain = [index[u]]
            for _ in range(k - 1):
                self.nodes.append(None)
                chain.append(len(self.nodes) - 1)
            chain.append(index[v])
            for a, b in zip(chain, chain[1:]):
                links.append((a, b, h))
            self.edge_nodes.append((chain, h))
        n = len(self.nodes)
        L = np.zeros((n, n))
        for a, b, h in links:
            L[a, a] += 1 / h
            L[b, b] += 1 / h
            L[a, b] -= 1 / h
            L[b, a] -= 1 / h
        self.Lp = np.linalg.pinv(L)
        self.n = n
        self.index = index

    def green(self, w):
        """Matrix ``g_mu(x, y)`` for node masses ``w`` (total 1)."""
        u = self.Lp @ w
        return self.Lp - u[:, None] - u[None, :] + w @ u

    def resistance(self, i, j):
        P = self.Lp
        return P[i, i] + P[j, j] - 2 * P[i, j]

    def _constancy(self, target, scale):
        # scale * Lp w + c = target, sum w = 1
        n = self.n
        A = np.zeros((n + 1, n + 1))
        A[:n, :n] = scale * self.Lp
        A[:n, n] = 1
        A[n, :n] = 1
        rhs = np.append(target, 1.0)
        return np.linalg.solve(A, rhs)[:n]

    def canonical(self, K, g):
        """Node masses making ``g(x, K) + g(x, x)`` constant."""
        k = np.zeros(self.n)
        for v, c in K.items():
            k[self.index[v]] = c
        target = self.Lp @ k + np.diag(self.Lp)
        return self._constancy(target, 2 * g), k

    def tau_measure(self):
        return self._constancy(np.diag(self.Lp), 2)


def discrete_invariants(vertices, edges, m, N=2048):
    """Floating approximations of (delta, epsilon, phi, tau, lambda, c, sup g(x,x))."""
    valence = {v: 0 for v in vertices}
    for u, v, _ in edges:
        valence[u] += 1
        valence[v] += 1
    K = {v: valence[v] + m.get(v, 0) - 2 for v in vertices}
    g = sum(K.values()) // 2 + 1
    D = Discretization(vertices, edges, N)
    w, k = D.canonical(K, g)
    G = D.green(w)
    diag = np.diag(G)
    delta = D.total
    c = float(diag @ w)
    eps = float(diag @ ((2 * g - 2) * w + k))
    phi = -delta / 4 + float(diag @ ((10 * g + 2) * w - k)) / 4
    w0 = D.tau_measure()
    tau = float(np.mean(np.diag(D.green(w0))))
    lam = (g - 1) / (6 * (2 * g + 1)) * phi + (eps + delta) / 12 if g >= 1 else float("nan")
    return {
        "delta": delta,
        "epsilon": eps,
        "phi": phi,
        "tau": tau,
        "lambda": lam,
        "c": c,
        "sup": float(diag.max()),
        "weights": w,
        "disc": D,
    }
