import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import circle, segment, theta
from metrized import (
    EdgePoint,
    InvalidGraph,
    Measure,
    build_graph,
    canonical_measure,
    diagonal_profile,
    effective_resistance,
    green_function,
    green_value,
    j_function,
    subdivide,
    tau_measure,
)
from metrized.harmonic import PiecewiseQuadratic, integrate, kernel_for, resistance_outside_edge
from metrized.invariants import random_point
from metrized.verify import GeneratorParams, random_graph
from oracles import canonical_measure_closed_form, resistance

seeds = st.integers(0, 10**6)
SMALL = GeneratorParams(max_vertices=6, max_edges=8)


def test_resistance_on_segment_and_circle():
    g, _ = segment(3)
    assert effective_resistance(g, EdgePoint(0, Fraction(1)), "b") == 2
    c, _ = circle(4)
    k = kernel_for(c)
    # d(L - d)/L on a circle of length 4
    p, q = c.from_raw("p"), c.from_raw((0, Fraction(1)))
    assert k.r(p, q) == Fraction(3, 4)
    assert effective_resistance(c, p, c.from_raw((0, Fraction(2)))) == 1


def test_parallel_resistance():
    g, _ = theta()
    assert kernel_for(g).r("a", "b") == Fraction(6, 11)
    assert resistance_outside_edge(g, 0) == Fraction(6, 5)


def test_bridge_has_infinite_outside_resistance():
    g, _ = segment()
    assert resistance_outside_edge(g, 0) == float("inf")


@given(seeds)
@settings(max_examples=25)
def test_kernel_matches_exact_oracle(seed):
    graph, _ = random_graph(seed, SMALL)
    k = kernel_for(graph)
    edges = [(e.u, e.v, e.length) for e in graph.edges]
    for a in graph.vertices:
        for b in graph.vertices:
            assert k.r(a, b) == resistance(graph.vertices, edges, a, b)


@given(seeds)
@settings(max_examples=25)
def test_three_resistance_engines_agree(seed):
    graph, _ = random_graph(seed, SMALL)
    rng = random.Random(seed)
    x, y = random_point(graph, rng), random_point(graph, rng)
    direct = effective_resistance(graph, x, y)
    assert direct == kernel_for(graph).r(x, y)
    g2, xv = subdivide(graph, x)
    gf = green_function(g2, Measure.dirac(g2, xv), g2.transfer(y, graph))
    assert gf(g2.transfer(y, graph)) == direct


@given(seeds)
@settings(max_examples=25)
def test_foster_identity(seed):
    graph, _ = random_graph(seed, SMALL)
    k = kernel_for(graph)
    assert sum(k.r(e.u, e.v) / e.length for e in graph.edges) == len(graph.vertices) - 1


@given(seeds)
@settings(max_examples=25)
def test_canonical_measure_matches_closed_form(seed):
    graph, pol = random_graph(seed, SMALL)
    mu = canonical_measure(graph, pol)
    atoms, dens, g = canonical_measure_closed_form(graph.vertices, [(e.u, e.v, e.length) for e in graph.edges], pol.m)
    assert g == pol.genus
    assert {v: mu.atoms.get(v, 0) for v in graph.vertices} == atoms
    assert [mu.densities.get(i, 0) for i in range(len(graph.edges))] == dens


def test_canonical_measure_of_tree_is_atomic():
    g, pol = segment(5, m=(4, 2))
    mu = canonical_measure(g, pol)
    assert not mu.densities
    # K = 3a + b, g = 3: atoms (K_p + 2 - n_p) / 2g
    assert mu.atoms == {"a": Fraction(2, 3), "b": Fraction(1, 3)}


def test_tau_measure_on_circle_is_uniform():
    c, _ = circle(3)
    mu0 = tau_measure(c)
    assert not mu0.atoms
    assert set(mu0.densities.values()) == {Fraction(1, 3)}


def test_tau_measure_can_be_signed():
    # a star with three legs: leaves carry positive mass, the centre negative
    g = build_graph(["o", "x", "y", "z"], [("o", "x", 1), ("o", "y", 1), ("o", "z", 1)])
    mu0 = tau_measure(g)
    assert mu0.atoms["o"] == Fraction(-1, 2)
    assert mu0.mass == 1
    assert not mu0.is_nonnegative()


@given(seeds)
@settings(max_examples=20)
def test_green_engines_symmetry_and_normalization(seed):
    graph, pol = random_graph(seed, SMALL)
    mu = canonical_measure(graph, pol)
    rng = random.Random(seed)
    x, y = random_point(graph, rng), random_point(graph, rng)
    gx, gy = green_function(graph, mu, x), green_function(graph, mu, y)
    assert gx(y) == gy(x) == green_value(graph, mu, x, y)
    assert gx.normalization() == 0
    assert not gx.balance_defects() and not gx.curvature_defects()


def test_green_on_circle():
    c, pol = circle(1)
    mu = canonical_measure(c, pol)
    antipode = c.from_raw((0, Fraction(1, 2)))
    assert green_value(c, mu, "p", antipode) == Fraction(-1, 24)
    assert green_value(c, mu, "p", "p") == Fraction(1, 48)


def test_green_requires_unit_mass():
    g, _ = segment()
    half = Measure(g, {"a": Fraction(1, 2)}, {})
    with pytest.raises(InvalidGraph):
        green_function(g, half, "a")
    with pytest.raises(InvalidGraph):
        green_value(g, half, "a", "b")


@given(seeds)
@settings(max_examples=20)
def test_j_function(seed):
    graph, _ = random_graph(seed, SMALL)
    rng = random.Random(seed)
    z, x, y = (random_point(graph, rng) for _ in range(3))
    k = kernel_for(graph)
    assert j_function(graph, z, x, y) == j_function(graph, z, y, x)
    assert j_function(graph, z, x, x) == k.r(x, z)
    assert j_function(graph, z, z, y) == 0


def test_diagonal_profile_on_circle():
    c, pol = circle(1)
    prof = diagonal_profile(c, canonical_measure(c, pol))
    assert not prof.continuity_defects()
    value, where = prof.maximum()
    assert value == Fraction(7, 48)
    assert where == c.from_raw((0, Fraction(1, 2)))


def test_measure_arithmetic_and_transport():
    g, _ = theta()
    mu = canonical_measure(g, theta()[1])
    assert (mu + mu).mass == 2
    assert (2 * mu - mu).mass == 1
    assert (-mu).mass == -1
    g2, _ = subdivide(g, EdgePoint(1, Fraction(1, 2)))
    carried = mu.carried(g2)
    assert carried.mass == 1 and carried.densities[len(g2.edges) - 1] == mu.densities[1]
    h = g.scaled(3)
    assert mu.scaled(h, 3).mass == 1
    with pytest.raises(InvalidGraph):
        Measure.dirac(g, EdgePoint(0, Fraction(1, 2)))


def test_integration_certificate():
    g, _ = segment(2)
    q = PiecewiseQuadratic(g, ((Fraction(1), Fraction(0), Fraction(0)),), {"a": Fraction(0), "b": Fraction(4)})
    nu = Measure(g, {"b": Fraction(1)}, {0: Fraction(1)})
    assert integrate(q, nu) == 4 + Fraction(8, 3)


def test_j_function_on_segment():
    g, _ = segment(1)
    assert j_function(g, "a", EdgePoint(0, Fraction(1, 2)), "b") == Fraction(1, 2)


def test_uniform_green_on_circle():
    L = Fraction(3)
    c = build_graph(["p"], [("p", "p", L)])
    mu = Measure(c, {}, {0: 1 / L, 1: 1 / L})
    for d in (Fraction(1, 2), Fraction(1), Fraction(3, 2)):
        y = c.from_raw((0, d))
        assert green_value(c, mu, "p", y) == d * d / (2 * L) - d / 2 + L / 12
        assert green_function(c, mu, "p").values.coefficients[0][0] == 1 / (2 * L)


def test_dirac_green_is_resistance_on_segment():
    g, _ = segment(2)
    mu = Measure.dirac(g, "a")
    for t in (Fraction(1, 3), Fraction(1), Fraction(7, 4)):
        y = EdgePoint(0, t)
        assert green_value(g, mu, y, y) == t


def test_tau_measure_examples():
    g, _ = segment(5)
    assert tau_measure(g).atoms == {"a": Fraction(1, 2), "b": Fraction(1, 2)}
    point = build_graph(["p"], [])
    assert tau_measure(point).atoms == {"p": 1}


def test_segment_canonical_green():
    g, pol = segment(2)
    mu = canonical_measure(g, pol)
    k = kernel_for(g)
    for s, t in [(Fraction(0), Fraction(1)), (Fraction(1, 2), Fraction(3, 2))]:
        x, y = g.point(0, s), g.point(0, t)
        assert green_value(g, mu, x, y) == Fraction(2, 4) - k.r(x, y) / 2
