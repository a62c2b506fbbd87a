"""Metrized graphs, points, divisors and polarizations.

A metrized graph is stored as a loop-free multigraph whose edges carry
positive rational lengths.  Every edge remembers which user-supplied
("raw") edge it came from and at which offset it starts, so points can
be carried between a graph and any of its subdivisions.
"""
from __future__ import annotations

import hashlib
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Union

from .errors import InvalidGraph, InvalidPolarization

__all__ = [
    "Divisor",
    "Edge",
    "EdgePoint",
    "GraphPoint",
    "MetrizedGraph",
    "Polarization",
    "build_graph",
    "first_betti",
    "genus",
    "parse_rational",
    "polarize",
    "subdivide",
    "total_length",
]


def parse_rational(value) -> Fraction:
    """Parse ``3``, ``"3"`` or ``"3/4"`` into a Fraction.

    Floats are refused: they would silently import rounding error.
    """
    if isinstance(value, bool) or isinstance(value, float):
        raise ValueError(f"not an exact rational: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if not isinstance(value, str):
        raise ValueError(f"not a rational: {value!r}")
    text = value.strip()
    num, sep, den = text.partition("/")
    try:
        n = int(num)
        d = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"not a rational: {value!r}") from None
    if d == 0:
        raise ValueError(f"zero denominator: {value!r}")
    return Fraction(n, d)


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class EdgePoint:
    """A point in the interior of ``edge``, ``t`` from its first endpoint."""

    edge: int
    t: Fraction

    def __str__(self) -> str:
        return f"{self.edge}@{format_rational(self.t)}"


GraphPoint = Union[str, EdgePoint]


@dataclass(frozen=True)
class Edge:
    u: str
    v: str
    length: Fraction


@dataclass(frozen=True, eq=False)
class MetrizedGraph:
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]
    # (raw edge index, offset of this edge's first endpoint along it)
    origins: tuple[tuple[int, Fraction], ...]

    @cached_property
    def index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def incidence(self) -> dict[str, list[tuple[int, int]]]:
        """vertex -> [(edge index, 0 if vertex is the first endpoint else 1)]"""
        inc: dict[str, list[tuple[int, int]]] = {v: [] for v in self.vertices}
        for i, e in enumerate(self.edges):
            inc[e.u].append((i, 0))
            inc[e.v].append((i, 1))
        return inc

    def valence(self, v: str) -> int:
        return len(self.incidence[v])

    def __len__(self) -> int:
        return len(self.vertices)

    def __repr__(self) -> str:
        return f"<MetrizedGraph V={len(self.vertices)} E={len(self.edges)} delta={total_length(self)}>"

    # -- points --------------------------------------------------------

    def point(self, edge: int, t) -> GraphPoint:
        """Normal form of the point at offset ``t`` on ``edge``."""
        if not 0 <= edge < len(self.edges):
            raise InvalidGraph(f"no edge with index {edge}")
        t = Fraction(t)
        e = self.edges[edge]
        if t < 0 or t > e.length:
            raise InvalidGraph(f"offset {t} outside edge {edge} of length {e.length}")
        if t == 0:
            return e.u
        if t == e.length:
            return e.v
        return EdgePoint(edge, t)

    def check_point(self, p: GraphPoint) -> GraphPoint:
        if isinstance(p, EdgePoint):
            return self.point(p.edge, p.t)
        if p not in self.index:
            raise InvalidGraph(f"unknown vertex {p!r}")
        return p

    def to_raw(self, p: GraphPoint):
        if isinstance(p, EdgePoint):
            raw, offset = self.origins[p.edge]
            return raw, offset + p.t
        return p

    def from_raw(self, raw) -> GraphPoint:
        if isinstance(raw, str):
            return self.check_point(raw)
        raw_index, t = raw
        for i, (r, offset) in enumerate(self.origins):
            if r == raw_index and offset <= t <= offset + self.edges[i].length:
                return self.point(i, t - offset)
        raise InvalidGraph(f"no point at offset {t} of raw edge {raw_index}")

    def transfer(self, p: GraphPoint, source: MetrizedGraph) -> GraphPoint:
        """Express a point of ``source`` (a graph sharing raw edges) on self."""
        if source is self:
            return p
        return self.from_raw(source.to_raw(p))

    # -- derived graphs ------------------------------------------------

    def scaled(self, factor) -> MetrizedGraph:
        factor = Fraction(factor)
        if factor <= 0:
            raise InvalidGraph("scale factor must be positive")
        return MetrizedGraph(
            self.vertices,
            tuple(Edge(e.u, e.v, e.length * factor) for e in self.edges),
            tuple((r, off * factor) for r, off in self.origins),
        )

    def digest(self) -> str:
        h = hashlib.sha256()
        h.update("|".join(self.vertices).encode())
        for e in self.edges:
            h.update(f";{e.u},{e.v},{format_rational(e.length)}".encode())
        return h.hexdigest()[:16]


def _fresh_vertex(taken, hint: str = "") -> str:
    n = len(taken)
    while f"_{hint}{n}" in taken:
        n += 1
    return f"_{hint}{n}"


def _check_connected(vertices: Iterable[str], edges: Iterable[Edge]) -> bool:
    parent = {v: v for v in vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for e in edges:
        parent[find(e.u)] = find(e.v)
    return len({find(v) for v in parent}) <= 1


def build_graph(vertices: Iterable, edges: Iterable) -> MetrizedGraph:
    """Validate and build a graph from a vertex list and ``(u, v, length)`` edges.

    Loops are split at a fresh midpoint vertex; the first half keeps the
    loop's index and the second half is appended after all input edges.
    """
    verts = [str(v) for v in vertices]
    if not verts:
        raise InvalidGraph("graph has no vertices")
    if len(set(verts)) != len(verts):
        raise InvalidGraph("duplicate vertex identifiers")
    known = set(verts)
    parsed: list[Edge] = []
    for i, item in enumerate(edges):
        if isinstance(item, Mapping):
            u, v, length = item.get("u"), item.get("v"), item.get("length")
        else:
            u, v, length = item
        u, v = str(u), str(v)
        for end in (u, v):
            if end not in known:
                raise InvalidGraph(f"edge {i}: dangling endpoint {end!r}")
        try:
            length = parse_rational(length)
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidGraph(f"edge {i}: {exc}") from None
        if length <= 0:
            raise InvalidGraph(f"edge {i}: length must be positive, got {length}")
        parsed.append(Edge(u, v, length))

    final: list[Edge] = []
    origins: list[tuple[int, Fraction]] = []
    tail: list[tuple[Edge, tuple[int, Fraction]]] = []
    for i, e in enumerate(parsed):
        if e.u == e.v:
            mid = _fresh_vertex(known, "m")
            known.add(mid)
            verts.append(mid)
            half = e.length / 2
            final.append(Edge(e.u, mid, half))
            origins.append((i, Fraction(0)))
            tail.append((Edge(mid, e.u, half), (i, half)))
        else:
            final.append(e)
            origins.append((i, Fraction(0)))
    for e, origin in tail:
        final.append(e)
        origins.append(origin)

    if not _check_connected(verts, final):
        raise InvalidGraph("graph is not connected")
    return MetrizedGraph(tuple(verts), tuple(final), tuple(origins))


def subdivide(graph: MetrizedGraph, p: GraphPoint) -> tuple[MetrizedGraph, str]:
    """Return an isometric graph having ``p`` as a vertex, and that vertex."""
    p = graph.check_point(p)
    if not isinstance(p, EdgePoint):
        return graph, p
    e = graph.edges[p.edge]
    x = _fresh_vertex(graph.index, "s")
    edges = list(graph.edges)
    edges[p.edge] = Edge(e.u, x, p.t)
    edges.append(Edge(x, e.v, e.length - p.t))
    raw, offset = graph.origins[p.edge]
    origins = list(graph.origins) + [(raw, offset + p.t)]
    return MetrizedGraph(graph.vertices + (x,), tuple(edges), tuple(origins)), x


def total_length(graph: MetrizedGraph) -> Fraction:
    return sum((e.length for e in graph.edges), Fraction(0))


def first_betti(graph: MetrizedGraph) -> int:
    return len(graph.edges) - len(graph.vertices) + 1


class Divisor(Mapping):
    """Finite formal integer combination of points; zero terms are dropped."""

    def __init__(self, coefficients: Mapping | Iterable = ()):
        items = dict(coefficients)
        self._c = {p: int(m) for p, m in items.items() if m != 0}

    def __getitem__(self, p):
        return self._c[p]

    def __iter__(self):
        return iter(self._c)

    def __len__(self):
        return len(self._c)

    def __repr__(self) -> str:
        terms = " + ".join(f"{m}*{p}" for p, m in self._c.items())
        return f"Divisor({terms or '0'})"

    def __eq__(self, other):
        if isinstance(other, Divisor):
            return self._c == other._c
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    @property
    def degree(self) -> int:
        return sum(self._c.values())

    def apply(self, f):
        """``f(D) = sum m_p f(p)``."""
        return sum((m * f(p) for p, m in self._c.items()), Fraction(0))


@dataclass(frozen=True, eq=False)
class Polarization:
    """Polarization given by the non-negative integers ``m`` at vertices.

    ``K`` has coefficient ``n_p + m_p - 2`` at every vertex ``p``.
    """

    graph: MetrizedGraph
    m: Mapping[str, int]

    def __post_init__(self):
        m = {}
        for p, value in dict(self.m).items():
            if p not in self.graph.index:
                raise InvalidPolarization(f"polarization point {p!r} is not a vertex")
            if int(value) != value or value < 0:
                raise InvalidPolarization(f"m at {p!r} must be a non-negative integer")
            if value:
                m[p] = int(value)
        object.__setattr__(self, "m", m)
        for p, k in self.K.items():
            if k < 0:
                raise InvalidPolarization(f"K is not effective at {p!r} (coefficient {k})")
        if self.K.degree % 2:
            raise InvalidPolarization(f"deg K = {self.K.degree} is odd")

    @cached_property
    def K(self) -> Divisor:
        g = self.graph
        return Divisor({v: g.valence(v) + self.m.get(v, 0) - 2 for v in g.vertices})

    @property
    def genus(self) -> int:
        return self.K.degree // 2 + 1

    @property
    def curve_type(self) -> bool:
        """True when every ``m_p`` is even, i.e. ``m_p = 2 q_p`` as for reduction graphs of curves."""
        return all(v % 2 == 0 for v in self.m.values())

    def on(self, graph: MetrizedGraph) -> Polarization:
        """Same polarization on a subdivision or rescaling of its graph."""
        return Polarization(graph, self.m)


def genus(graph: MetrizedGraph, pol: Polarization) -> int:
    if pol.graph is not graph:
        pol = pol.on(graph)
    return pol.genus


def polarize(graph: MetrizedGraph, marks: Mapping[GraphPoint, int]) -> tuple[MetrizedGraph, Polarization]:
    """Subdivide at every marked edge point and build the polarization."""
    m: dict[str, int] = {}
    pending = []
    for p, value in marks.items():
        if isinstance(p, EdgePoint):
            pending.append((graph.to_raw(graph.check_point(p)), value))
        else:
            q = graph.check_point(p)
            m[q] = m.get(q, 0) + value
    for raw, value in pending:
        p = graph.from_raw(raw)
        graph, v = subdivide(graph, p)
        m[v] = m.get(v, 0) + value
    return graph, Polarization(graph, m)
