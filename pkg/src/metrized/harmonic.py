"""Exact potential theory on metrized graphs.

Two independent engines live here:

* :func:`green_function` solves the weighted vertex Laplacian of a graph
  subdivided at the base point and returns ``y -> g_mu(x, y)`` as a
  piecewise quadratic;
* :class:`ResistanceKernel` inverts the grounded Laplacian once and
  evaluates the resistance ``r(x, y)`` between arbitrary points in closed
  form.  Green functions then follow from the j-function representation
  ``g_mu(x, y) = (h(x) + h(y) - r(x, y))/2 - E/2`` with
  ``h(x) = int r(x, z) dmu(z)`` and ``E = int h dmu``.

Sign convention: ``Delta f = -f'' dx - sum_p (sum_v d_v f(p)) delta_p``, so
a Green function has ``g'' = +density`` along edges and outgoing slopes
summing to ``mu({p}) - [p = x]`` at every vertex.
"""
from __future__ import annotations

import math
import weakref
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .core import Divisor, EdgePoint, GraphPoint, MetrizedGraph, Polarization, subdivide
from .errors import DegreeCertificateFailure, InvalidGraph, SolverInconsistency
from .linalg import solve, solve_overdetermined

__all__ = [
    "GreenFunction",
    "Measure",
    "PiecewiseQuadratic",
    "Potential",
    "ResistanceKernel",
    "canonical_measure",
    "diagonal_profile",
    "edge_samples",
    "effective_resistance",
    "green_function",
    "green_value",
    "integrate",
    "j_function",
    "kernel_for",
    "resistance_outside_edge",
    "tau_measure",
]

ZERO = Fraction(0)


# -- measures ------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Measure:
    """Point masses at vertices plus a constant density on each edge."""

    graph: MetrizedGraph
    atoms: Mapping[str, Fraction]
    densities: Mapping[int, Fraction]

    def __post_init__(self):
        atoms = {}
        for p, w in dict(self.atoms).items():
            if p not in self.graph.index:
                raise InvalidGraph(f"atom at {p!r}, which is not a vertex")
            if w:
                atoms[p] = Fraction(w)
        dens = {}
        for e, w in dict(self.densities).items():
            if not 0 <= e < len(self.graph.edges):
                raise InvalidGraph(f"density on unknown edge {e}")
            if w:
                dens[e] = Fraction(w)
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "densities", dens)

    @classmethod
    def dirac(cls, graph: MetrizedGraph, p: GraphPoint) -> Measure:
        p = graph.check_point(p)
        if isinstance(p, EdgePoint):
            raise InvalidGraph("subdivide the graph at an atom before placing it")
        return cls(graph, {p: Fraction(1)}, {})

    @classmethod
    def of_divisor(cls, graph: MetrizedGraph, D: Divisor) -> Measure:
        return cls(graph, dict(D), {})

    @property
    def mass(self) -> Fraction:
        edges = self.graph.edges
        return sum(self.atoms.values(), ZERO) + sum((w * edges[e].length for e, w in self.densities.items()), ZERO)

    def is_nonnegative(self) -> bool:
        return all(w >= 0 for w in self.atoms.values()) and all(w >= 0 for w in self.densities.values())

    def __add__(self, other: Measure) -> Measure:
        if other.graph is not self.graph:
            raise InvalidGraph("measures live on different graphs")
        atoms = dict(self.atoms)
        for p, w in other.atoms.items():
            atoms[p] = atoms.get(p, ZERO) + w
        dens = dict(self.densities)
        for e, w in other.densities.items():
            dens[e] = dens.get(e, ZERO) + w
        return Measure(self.graph, atoms, dens)

    def __rmul__(self, c) -> Measure:
        c = Fraction(c)
        return Measure(
            self.graph,
            {p: c * w for p, w in self.atoms.items()},
            {e: c * w for e, w in self.densities.items()},
        )

    def __neg__(self) -> Measure:
        return -1 * self

    def __sub__(self, other: Measure) -> Measure:
        return self + (-other)

    def carried(self, graph: MetrizedGraph) -> Measure:
        """The same measure on a subdivision of its graph."""
        if graph is self.graph:
            return self
        old = self.graph
        dens = {}
        for i, (raw, off) in enumerate(graph.origins):
            for j, (raw_j, off_j) in enumerate(old.origins):
                if raw_j == raw and off_j <= off < off_j + old.edges[j].length:
                    if j in self.densities:
                        dens[i] = self.densities[j]
                    break
        return Measure(graph, self.atoms, dens)

    def scaled(self, graph: MetrizedGraph, factor) -> Measure:
        """The push-forward onto ``graph``, a copy rescaled by ``factor``."""
        factor = Fraction(factor)
        return Measure(graph, self.atoms, {e: w / factor for e, w in self.densities.items()})

    def __repr__(self) -> str:
        return f"Measure(atoms={self.atoms}, densities={self.densities})"


# -- piecewise quadratics -----------------------------------------------


@dataclass(frozen=True, eq=False)
class PiecewiseQuadratic:
    """``t -> a t^2 + b t + c`` on every edge, ``t`` measured from its first endpoint."""

    graph: MetrizedGraph
    coefficients: tuple[tuple[Fraction, Fraction, Fraction], ...]
    vertex_values: Mapping[str, Fraction]

    def on_edge(self, e: int, t) -> Fraction:
        a, b, c = self.coefficients[e]
        return (a * t + b) * t + c

    def __call__(self, p: GraphPoint) -> Fraction:
        if isinstance(p, EdgePoint):
            return self.on_edge(p.edge, p.t)
        return self.vertex_values[p]

    def continuity_defects(self) -> list[tuple[int, int]]:
        bad = []
        for i, e in enumerate(self.graph.edges):
            if self.on_edge(i, 0) != self.vertex_values[e.u]:
                bad.append((i, 0))
            if self.on_edge(i, e.length) != self.vertex_values[e.v]:
                bad.append((i, 1))
        return bad

    def maximum(self) -> tuple[Fraction, GraphPoint]:
        """Exact maximum over the graph and a point attaining it."""
        best_p = self.graph.vertices[0]
        best = self.vertex_values[best_p]
        for v in self.graph.vertices:
            if self.vertex_values[v] > best:
                best, best_p = self.vertex_values[v], v
        for i, (a, b, c) in enumerate(self.coefficients):
            if a < 0:
                t = -b / (2 * a)
                if 0 < t < self.graph.edges[i].length:
                    val = self.on_edge(i, t)
                    if val > best:
                        best, best_p = val, EdgePoint(i, t)
        return best, best_p

    def table(self) -> list[dict]:
        return [
            {"edge": i, "u": e.u, "v": e.v, "length": e.length, "a": a, "b": b, "c": c}
            for i, (e, (a, b, c)) in enumerate(zip(self.graph.edges, self.coefficients))
        ]


def _simpson(q: PiecewiseQuadratic, e: int) -> Fraction:
    ell = q.graph.edges[e].length
    return ell / 6 * (q.on_edge(e, 0) + 4 * q.on_edge(e, ell / 2) + q.on_edge(e, ell))


def _simpson5(q: PiecewiseQuadratic, e: int) -> Fraction:
    ell = q.graph.edges[e].length
    f = [q.on_edge(e, ell * j / 4) for j in range(5)]
    return ell / 12 * (f[0] + 4 * f[1] + 2 * f[2] + 4 * f[3] + f[4])


def integrate(profile: PiecewiseQuadratic, nu: Measure) -> Fraction:
    """Exact ``int profile dnu``.

    Edge parts use Simpson's rule, exact for quadratics, and are checked
    against the two-panel refinement.
    """
    if nu.graph is not profile.graph:
        raise InvalidGraph("profile and measure live on different graphs")
    total = sum((w * profile.vertex_values[p] for p, w in nu.atoms.items()), ZERO)
    for e, w in nu.densities.items():
        s = _simpson(profile, e)
        if s != _simpson5(profile, e):
            raise DegreeCertificateFailure(f"Simpson refinement disagrees on edge {e}")
        total += w * s
    return total


# -- Laplacian engine ----------------------------------------------------


def _laplacian_solve(graph: MetrizedGraph, ground: str, rhs: Mapping[str, Fraction]) -> dict[str, Fraction]:
    """Vertex potentials ``G`` with ``G[ground] = 0`` and ``(L G)_p = rhs[p]`` off the ground.

    ``(L G)_p = sum over edges at p of (G_p - G_other) / length``.
    """
    others = [v for v in graph.vertices if v != ground]
    if not others:
        return {ground: ZERO}
    pos = {v: i for i, v in enumerate(others)}
    n = len(others)
    A = [[ZERO] * n for _ in range(n)]
    for e in graph.edges:
        w = 1 / e.length
        iu, iv = pos.get(e.u), pos.get(e.v)
        if iu is not None:
            A[iu][iu] += w
        if iv is not None:
            A[iv][iv] += w
        if iu is not None and iv is not None:
            A[iu][iv] -= w
            A[iv][iu] -= w
    B = [[Fraction(rhs.get(v, 0))] for v in others]
    X = solve(A, B)
    G = {ground: ZERO}
    for v, i in pos.items():
        G[v] = X[i][0]
    return G


def effective_resistance(graph: MetrizedGraph, p: GraphPoint, q: GraphPoint) -> Fraction:
    """Resistance between ``p`` and ``q`` by a unit-current Laplacian solve."""
    p, q = graph.check_point(p), graph.check_point(q)
    if p == q:
        return ZERO
    g1, pv = subdivide(graph, p)
    g2, qv = subdivide(g1, g1.transfer(q, graph))
    return _laplacian_solve(g2, pv, {qv: Fraction(1)})[qv]


def resistance_outside_edge(graph: MetrizedGraph, e: int):
    """Resistance between the endpoints of edge ``e`` in the graph with ``e`` removed.

    Returns ``math.inf`` when ``e`` is a bridge.
    """
    edge = graph.edges[e]
    rest = tuple(f for i, f in enumerate(graph.edges) if i != e)
    reach, stack = {edge.u}, [edge.u]
    while stack:
        v = stack.pop()
        for f in rest:
            for a, b in ((f.u, f.v), (f.v, f.u)):
                if a == v and b not in reach:
                    reach.add(b)
                    stack.append(b)
    if edge.v not in reach:
        return math.inf
    comp = tuple(v for v in graph.vertices if v in reach)
    kept = tuple(f for f in rest if f.u in reach)
    sub = MetrizedGraph(comp, kept, tuple(graph.origins[i] for i, f in enumerate(graph.edges) if i != e and f.u in reach))
    return _laplacian_solve(sub, edge.u, {edge.v: Fraction(1)})[edge.v]


def j_function(graph: MetrizedGraph, zeta: GraphPoint, x: GraphPoint, y: GraphPoint) -> Fraction:
    """Potential at ``y`` for unit current entering at ``x`` and leaving at grounded ``zeta``."""
    zeta, x, y = (graph.check_point(p) for p in (zeta, x, y))
    g = graph
    names = []
    for p in (zeta, x, y):
        g, v = subdivide(g, g.transfer(p, graph))
        names.append(v)
    zv, xv, yv = names
    if xv == zv:
        return ZERO
    return _laplacian_solve(g, zv, {xv: Fraction(1)})[yv]


@dataclass(frozen=True, eq=False)
class GreenFunction:
    """``y -> g_mu(x, y)`` on ``graph``, the caller's graph subdivided at ``x``."""

    source: MetrizedGraph
    graph: MetrizedGraph
    measure: Measure
    x: str
    values: PiecewiseQuadratic

    def __call__(self, y: GraphPoint) -> Fraction:
        return self.values(self.graph.transfer(y, self.source))

    def balance_defects(self) -> dict[str, Fraction]:
        """Vertices where outgoing slopes fail to sum to ``mu({p}) - [p = x]``."""
        slopes = {v: ZERO for v in self.graph.vertices}
        for i, e in enumerate(self.graph.edges):
            a, b, _ = self.values.coefficients[i]
            slopes[e.u] += b
            slopes[e.v] -= 2 * a * e.length + b
        bad = {}
        for v, s in slopes.items():
            want = self.measure.atoms.get(v, ZERO) - (1 if v == self.x else 0)
            if s != want:
                bad[v] = s - want
        return bad

    def curvature_defects(self) -> list[int]:
        return [
            i
            for i, (a, _, _) in enumerate(self.values.coefficients)
            if 2 * a != self.measure.densities.get(i, ZERO)
        ]

    def normalization(self) -> Fraction:
        return integrate(self.values, self.measure)


def green_function(graph: MetrizedGraph, mu: Measure, x: GraphPoint) -> GreenFunction:
    """Green function of ``mu`` with base point ``x`` via the vertex Laplacian."""
    if mu.graph is not graph:
        raise InvalidGraph("measure lives on a different graph")
    if mu.mass != 1:
        raise InvalidGraph(f"measure must have mass 1, has {mu.mass}")
    g2, xv = subdivide(graph, graph.check_point(x))
    mu2 = mu.carried(g2)
    rhs = {v: -mu2.atoms.get(v, ZERO) for v in g2.vertices}
    rhs[xv] += 1
    for i, e in enumerate(g2.edges):
        half = mu2.densities.get(i, ZERO) * e.length / 2
        rhs[e.u] -= half
        rhs[e.v] -= half
    if sum(rhs.values(), ZERO) != 0:
        raise SolverInconsistency("right-hand side does not sum to zero")
    G = _laplacian_solve(g2, g2.vertices[0], rhs)
    coeffs = []
    for i, e in enumerate(g2.edges):
        a = mu2.densities.get(i, ZERO) / 2
        b = (G[e.v] - G[e.u]) / e.length - a * e.length
        coeffs.append((a, b, G[e.u]))
    raw = PiecewiseQuadratic(g2, tuple(coeffs), G)
    shift = integrate(raw, mu2)
    values = PiecewiseQuadratic(
        g2,
        tuple((a, b, c - shift) for a, b, c in coeffs),
        {v: val - shift for v, val in G.items()},
    )
    return GreenFunction(graph, g2, mu2, xv, values)


# -- closed-form resistance engine ------------------------------------


class ResistanceKernel:
    """All resistances on ``graph`` from one grounded Laplacian inverse.

    For a point at offset ``t`` on edge ``e = (u, w)`` of length ``l`` and a
    point ``y`` off the interior of ``e``::

        r(x, y) = (1 - t/l) r(u, y) + (t/l) r(w, y) + t (l - t) k_e
        k_e     = (l - r(u, w)) / l^2      (zero exactly for bridges)

    and for two points of the same edge at distance ``d``,
    ``r = d - d^2 k_e``.
    """

    def __init__(self, graph: MetrizedGraph):
        self.graph = graph
        n = len(graph.vertices)
        idx = graph.index
        if n == 1:
            R = [[ZERO]]
        else:
            A = [[ZERO] * (n - 1) for _ in range(n - 1)]
            for e in graph.edges:
                w = 1 / e.length
                iu, iv = idx[e.u] - 1, idx[e.v] - 1
                if iu >= 0:
                    A[iu][iu] += w
                if iv >= 0:
                    A[iv][iv] += w
                if iu >= 0 and iv >= 0:
                    A[iu][iv] -= w
                    A[iv][iu] -= w
            eye = [[Fraction(int(i == j)) for j in range(n - 1)] for i in range(n - 1)]
            M = solve(A, eye)
            diag = [ZERO] + [M[i][i] for i in range(n - 1)]

            def m(i, j):
                return M[i - 1][j - 1] if i and j else ZERO

            R = [[diag[i] + diag[j] - 2 * m(i, j) for j in range(n)] for i in range(n)]
        self.R = R
        self.ends = [(idx[e.u], idx[e.v], e.length) for e in graph.edges]
        self.k = [(ell - R[u][w]) / (ell * ell) for u, w, ell in self.ends]

    def profile(self, x: GraphPoint) -> list[Fraction]:
        """``[r(x, v) for v in vertices]``."""
        if isinstance(x, EdgePoint):
            u, w, ell = self.ends[x.edge]
            t = x.t
            s = t / ell
            bump = t * (ell - t) * self.k[x.edge]
            Ru, Rw = self.R[u], self.R[w]
            return [Ru[j] + s * (Rw[j] - Ru[j]) + bump for j in range(len(Ru))]
        return self.R[self.graph.index[x]]

    def r(self, x: GraphPoint, y: GraphPoint) -> Fraction:
        if isinstance(y, EdgePoint):
            x, y = y, x
        if not isinstance(y, EdgePoint):
            return self.profile(x)[self.graph.index[y]]
        # both on edges
        if x.edge == y.edge:
            d = abs(x.t - y.t)
            return d - d * d * self.k[x.edge]
        prof = self.profile(x)
        u, w, ell = self.ends[y.edge]
        t = y.t
        return prof[u] + t / ell * (prof[w] - prof[u]) + t * (ell - t) * self.k[y.edge]

    def edge_integral(self, f: int, x: GraphPoint, prof: list[Fraction]) -> Fraction:
        """``int over edge f of r(x, z) dz``; ``prof`` is ``self.profile(x)``."""
        u, w, ell = self.ends[f]
        k = self.k[f]
        if isinstance(x, EdgePoint) and x.edge == f:
            t = x.t
            s = ell - t
            return (t * t + s * s) / 2 - k * (t * t * t + s * s * s) / 3
        return ell * (prof[u] + prof[w]) / 2 + k * ell * ell * ell / 6

    def potential(self, mu: Measure) -> Potential:
        return Potential(self, mu)


_KERNELS: weakref.WeakKeyDictionary = weakref.WeakKeyDictionary()


def kernel_for(graph: MetrizedGraph) -> ResistanceKernel:
    k = _KERNELS.get(graph)
    if k is None:
        k = _KERNELS[graph] = ResistanceKernel(graph)
    return k


class Potential:
    """``h(x) = int r(x, z) dmu(z)`` and the Green function built from it."""

    def __init__(self, kernel: ResistanceKernel, mu: Measure):
        if mu.graph is not kernel.graph:
            raise InvalidGraph("measure lives on a different graph")
        self.kernel = kernel
        self.mu = mu
        graph = kernel.graph
        idx = graph.index
        self._atoms = [(idx[p], w) for p, w in mu.atoms.items()]
        self._dens = list(mu.densities.items())
        self._mass = mu.mass
        self._hv = [self._h_direct(v) for v in graph.vertices]
        # per edge: own density, mass off the edge, own contribution at each end
        self._edge = {}
        for f, w in self._dens:
            u, v, ell = kernel.ends[f]
            own = w * (ell * kernel.R[u][v] / 2 + kernel.k[f] * ell**3 / 6)
            self._edge[f] = (w, self._mass - w * ell, own)
        energy = sum((w * self._hv[j] for j, w in self._atoms), ZERO)
        for f, w in self._dens:
            u, v, ell = kernel.ends[f]
            energy += w * ell / 6 * (self._hv[u] + 4 * self.h(EdgePoint(f, ell / 2)) + self._hv[v])
        self.energy = energy

    def _h_direct(self, x: GraphPoint) -> Fraction:
        prof = self.kernel.profile(x)
        total = ZERO
        for j, w in self._atoms:
            total += w * prof[j]
        for f, w in self._dens:
            total += w * self.kernel.edge_integral(f, x, prof)
        return total

    def h(self, x: GraphPoint) -> Fraction:
        kernel = self.kernel
        if not isinstance(x, EdgePoint):
            return self._hv[kernel.graph.index[x]]
        # Off-edge terms are affine in the profile, which is affine along
        # the edge plus the bump t(l - t)k.
        u, v, ell = kernel.ends[x.edge]
        t = x.t
        s = t / ell
        bump = t * (ell - t) * kernel.k[x.edge]
        w, rest, own = self._edge.get(x.edge) or (ZERO, self._mass, ZERO)
        hu, hv = self._hv[u] - own, self._hv[v] - own
        total = hu + s * (hv - hu) + bump * rest
        if w:
            total += w * kernel.edge_integral(x.edge, x, None)
        return total

    def green(self, x: GraphPoint, y: GraphPoint) -> Fraction:
        return (self.h(x) + self.h(y) - self.kernel.r(x, y) - self.energy) / 2

    def diagonal(self, x: GraphPoint) -> Fraction:
        return self.h(x) - self.energy / 2


def green_value(graph: MetrizedGraph, mu: Measure, x: GraphPoint, y: GraphPoint) -> Fraction:
    """``g_mu(x, y)`` through the j-function representation."""
    if mu.mass != 1:
        raise InvalidGraph(f"measure must have mass 1, has {mu.mass}")
    pot = kernel_for(graph).potential(mu)
    return pot.green(graph.check_point(x), graph.check_point(y))


# -- canonical measures ------------------------------------------------


def edge_samples(graph: MetrizedGraph, per_edge: int) -> list[EdgePoint]:
    return [
        EdgePoint(i, e.length * j / (per_edge + 1))
        for i, e in enumerate(graph.edges)
        for j in range(1, per_edge + 1)
    ]


def _constancy_solve(graph: MetrizedGraph, K: Divisor | None, genus: int) -> Measure:
    """Mass-one measure making ``h(x) - r(x, K)/(2 genus)`` constant.

    Unknowns are an atom per vertex and a density per edge.  On each edge
    the function is sampled at ``l/4, l/2, 3l/4``; its second difference and
    its symmetric first difference must vanish, i.e. both fitted
    coefficients are zero.
    """
    kernel = kernel_for(graph)
    verts = graph.vertices
    n, m = len(verts), len(graph.edges)
    kpos = [(graph.index[p], c) for p, c in K.items()] if K else []

    def row(x):
        prof = kernel.profile(x)
        coeffs = list(prof) + [kernel.edge_integral(f, x, prof) for f in range(m)]
        target = sum((c * prof[j] for j, c in kpos), ZERO) / (2 * genus)
        return coeffs, target

    A, b = [], []
    for i, e in enumerate(graph.edges):
        q = e.length / 4
        (c1, t1), (c2, t2), (c3, t3) = (row(EdgePoint(i, q * j)) for j in (1, 2, 3))
        A.append([x1 - 2 * x2 + x3 for x1, x2, x3 in zip(c1, c2, c3)])
        b.append(t1 - 2 * t2 + t3)
        A.append([x3 - x1 for x1, x3 in zip(c1, c3)])
        b.append(t3 - t1)
    A.append([Fraction(1)] * n + [e.length for e in graph.edges])
    b.append(Fraction(1))
    z = solve_overdetermined(A, b)
    return Measure(graph, dict(zip(verts, z[:n])), dict(enumerate(z[n:])))


def canonical_measure(graph: MetrizedGraph, pol: Polarization, check: bool = True) -> Measure:
    """The measure for which ``g(x, K) + g(x, x)`` is constant on the graph."""
    if pol.graph is not graph:
        pol = pol.on(graph)
    mu = _constancy_solve(graph, pol.K, pol.genus)
    if mu.mass != 1:
        raise SolverInconsistency("canonical measure lost its normalization")
    if not mu.is_nonnegative():
        raise SolverInconsistency(f"canonical measure has negative parts: {mu}")
    if check:
        pot = kernel_for(graph).potential(mu)
        K = pol.K

        def c_at(x):
            return K.apply(lambda p: pot.green(x, p)) + pot.diagonal(x)

        ref = c_at(graph.vertices[0])
        for x in list(graph.vertices) + edge_samples(graph, 5):
            if c_at(x) != ref:
                raise SolverInconsistency(f"g(x,K) + g(x,x) not constant at {x}")
    return mu


def tau_measure(graph: MetrizedGraph, check: bool = True) -> Measure:
    """The mass-one measure whose Green function has constant diagonal.

    It may carry negative atoms (at vertices of valence three or more).
    """
    mu = _constancy_solve(graph, None, 1)
    if mu.mass != 1:
        raise SolverInconsistency("tau measure lost its normalization")
    if check:
        pot = kernel_for(graph).potential(mu)
        ref = pot.diagonal(graph.vertices[0])
        for x in list(graph.vertices) + edge_samples(graph, 5):
            if pot.diagonal(x) != ref:
                raise SolverInconsistency(f"g(x,x) not constant at {x}")
    return mu


def diagonal_profile(graph: MetrizedGraph, mu: Measure) -> PiecewiseQuadratic:
    """``x -> g_mu(x, x)`` as an exact per-edge quadratic.

    Fitted through ``l/4, l/2, 3l/4``; the value at ``l/3`` and at both
    endpoints must reproduce the fit.
    """
    pot = kernel_for(graph).potential(mu)
    vertex_values = {v: pot.diagonal(v) for v in graph.vertices}
    coeffs = []
    for i, e in enumerate(graph.edges):
        q = e.length / 4
        f1, f2, f3 = (pot.diagonal(EdgePoint(i, q * j)) for j in (1, 2, 3))
        a = (f1 - 2 * f2 + f3) / (2 * q * q)
        b = (f3 - f1) / (2 * q) - 4 * a * q
        c = f2 - 4 * a * q * q - 2 * b * q
        coeffs.append((a, b, c))
        t4 = e.length / 3
        checks = (
            (t4, pot.diagonal(EdgePoint(i, t4))),
            (ZERO, vertex_values[e.u]),
            (e.length, vertex_values[e.v]),
        )
        for t, want in checks:
            if (a * t + b) * t + c != want:
                raise DegreeCertificateFailure(f"diagonal is not quadratic on edge {i} (t={t})")
    return PiecewiseQuadratic(graph, tuple(coeffs), vertex_values)
