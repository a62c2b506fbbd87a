"""Graph invariants of a polarized metrized graph and the audits relating them.

``analyze`` computes the canonical measure, the tau measure and the
diagonal profile once per polarization; the public helpers read from it.
Identity and inequality checks return data, never raise.
"""
from __future__ import annotations

import math
import random
import weakref
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence

from .bounds import cinkir_constant, green_sup_constant
from .core import EdgePoint, GraphPoint, MetrizedGraph, Polarization, first_betti, format_rational, total_length
from .errors import InvalidPolarization
from .harmonic import (
    Measure,
    canonical_measure,
    diagonal_profile,
    edge_samples,
    integrate,
    kernel_for,
    tau_measure,
)

__all__ = [
    "Analysis",
    "AuditEntry",
    "InvariantReport",
    "analyze",
    "c_constant",
    "elkies_check",
    "epsilon_invariant",
    "inequality_audit",
    "invariant_report",
    "lambda_invariant",
    "phi_invariant",
    "random_point",
    "sample_points",
    "sup_green",
    "tau_invariant",
]


class Analysis:
    """Lazily computed harmonic data of ``(graph, pol)``."""

    def __init__(self, graph: MetrizedGraph, pol: Polarization):
        if pol.graph is not graph:
            pol = pol.on(graph)
        self.graph = graph
        self.pol = pol
        self.g = pol.genus
        self.K = pol.K
        self.kernel = kernel_for(graph)

    @cached_property
    def mu(self) -> Measure:
        return canonical_measure(self.graph, self.pol, check=False)

    @cached_property
    def mu0(self) -> Measure:
        return tau_measure(self.graph, check=False)

    @cached_property
    def pot(self):
        return self.kernel.potential(self.mu)

    @cached_property
    def pot0(self):
        return self.kernel.potential(self.mu0)

    @cached_property
    def profile(self):
        return diagonal_profile(self.graph, self.mu)

    @cached_property
    def delta(self) -> Fraction:
        return total_length(self.graph)

    @cached_property
    def c_integral(self) -> Fraction:
        return integrate(self.profile, self.mu)

    @cached_property
    def K_integral(self) -> Fraction:
        return self.K.apply(self.profile)

    @cached_property
    def epsilon(self) -> Fraction:
        return (2 * self.g - 2) * self.c_integral + self.K_integral

    @cached_property
    def phi(self) -> Fraction:
        return -self.delta / 4 + ((10 * self.g + 2) * self.c_integral - self.K_integral) / 4

    @cached_property
    def tau(self) -> Fraction:
        return self.pot0.diagonal(self.graph.vertices[0])

    @cached_property
    def lam(self) -> Fraction:
        g = self.g
        return Fraction(g - 1, 6 * (2 * g + 1)) * self.phi + (self.epsilon + self.delta) / 12

    @cached_property
    def c_formula(self) -> Fraction:
        return (4 * self.phi + self.delta + self.epsilon) / (12 * self.g)

    @cached_property
    def sup(self) -> tuple[Fraction, GraphPoint]:
        return self.profile.maximum()

    @property
    def is_tree(self) -> bool:
        return first_betti(self.graph) == 0

    @property
    def tree_constants_apply(self) -> bool:
        # the tree constants fail for odd m_p, e.g. a segment with m = (3, 1)
        return self.is_tree and self.pol.curve_type

    def green(self, x: GraphPoint, y: GraphPoint) -> Fraction:
        return self.pot.green(x, y)

    def green_K(self, x: GraphPoint) -> Fraction:
        return self.K.apply(lambda p: self.pot.green(x, p))

    def r_K(self, x: GraphPoint) -> Fraction:
        prof = self.kernel.profile(x)
        idx = self.graph.index
        return sum((m * prof[idx[p]] for p, m in self.K.items()), Fraction(0))


_CACHE: weakref.WeakKeyDictionary = weakref.WeakKeyDictionary()


def analyze(graph: MetrizedGraph, pol: Polarization) -> Analysis:
    if pol.graph is not graph:
        pol = pol.on(graph)
    a = _CACHE.get(pol)
    if a is None:
        a = _CACHE[pol] = Analysis(graph, pol)
    return a


def epsilon_invariant(graph, pol) -> Fraction:
    return analyze(graph, pol).epsilon


def phi_invariant(graph, pol) -> Fraction:
    return analyze(graph, pol).phi


def tau_invariant(graph: MetrizedGraph) -> Fraction:
    """``g_{mu_0}(x, x)``, from the tau measure alone (no polarization needed)."""
    mu0 = tau_measure(graph, check=False)
    return kernel_for(graph).potential(mu0).diagonal(graph.vertices[0])


def lambda_invariant(graph, pol) -> Fraction:
    return analyze(graph, pol).lam


def c_constant(graph, pol) -> Fraction:
    """``int g(x,x) dmu_K``; the formula in phi, delta, epsilon is checked against it."""
    a = analyze(graph, pol)
    if a.c_integral != a.c_formula:
        raise ArithmeticError(f"c paths disagree: {a.c_integral} != {a.c_formula}")
    return a.c_integral


def sup_green(graph, pol) -> Fraction:
    return analyze(graph, pol).sup[0]


# -- sampling ------------------------------------------------------------


def sample_points(graph: MetrizedGraph, minimum: int = 10) -> list[GraphPoint]:
    """Deterministic spread of points: all vertices plus evenly spaced edge points."""
    pts: list[GraphPoint] = list(graph.vertices)
    if graph.edges:
        per = max(1, -(-(minimum - len(pts)) // len(graph.edges)))
        pts += edge_samples(graph, per)
    return pts


def random_point(graph: MetrizedGraph, rng: random.Random, denominator: int = 12) -> GraphPoint:
    if not graph.edges or rng.random() < 0.2:
        return rng.choice(graph.vertices)
    e = rng.randrange(len(graph.edges))
    ell = graph.edges[e].length
    return graph.point(e, ell * Fraction(rng.randint(0, denominator), denominator))


# -- reports ---------------------------------------------------------------


@dataclass
class AuditEntry:
    name: str
    passed: bool
    witness: Optional[str] = None
    checked: int = 0

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "witness": self.witness, "checked": self.checked}


@dataclass
class InvariantReport:
    genus: int
    delta: Fraction
    epsilon: Fraction
    phi: Fraction
    tau: Fraction
    lam: Fraction
    c: Fraction
    sup_diagonal: Fraction
    sup_point: str
    is_tree: bool
    audit: list[AuditEntry] = field(default_factory=list)

    @property
    def vector(self) -> tuple[Fraction, ...]:
        return (self.delta, self.epsilon, self.phi, self.tau, self.lam, self.c, self.sup_diagonal)

    @property
    def failures(self) -> list[AuditEntry]:
        return [a for a in self.audit if not a.passed]

    def values(self) -> dict[str, Fraction]:
        return {
            "delta": self.delta,
            "epsilon": self.epsilon,
            "phi": self.phi,
            "tau": self.tau,
            "lambda": self.lam,
            "c": self.c,
            "supDiagonal": self.sup_diagonal,
        }

    def to_dict(self) -> dict:
        out = {"genus": self.genus, "isTree": self.is_tree, "supPoint": self.sup_point}
        out.update({k: format_rational(v) for k, v in self.values().items()})
        out["identityAudit"] = [a.to_dict() for a in self.audit]
        return out


class _Auditor:
    def __init__(self):
        self.entries: list[AuditEntry] = []

    def check(self, name: str, cases):
        """``cases`` yields ``(ok, witness)``; the first failure is kept."""
        n = 0
        for ok, witness in cases:
            n += 1
            if not ok:
                if callable(witness):
                    witness = witness()
                self.entries.append(AuditEntry(name, False, witness, n))
                return
        self.entries.append(AuditEntry(name, True, None, n))


def _fmt(q) -> str:
    return format_rational(q) if isinstance(q, (int, Fraction)) else str(q)


def invariant_report(graph: MetrizedGraph, pol: Polarization) -> InvariantReport:
    a = analyze(graph, pol)
    g, delta, eps, phi, tau, c = a.g, a.delta, a.epsilon, a.phi, a.tau, a.c_integral
    sup, sup_at = a.sup
    aud = _Auditor()
    pts = sample_points(graph, 10)
    dense = list(graph.vertices) + edge_samples(graph, 5)

    aud.check("c_dual_path", [(12 * g * c == 4 * phi + delta + eps, f"12g*c={_fmt(12 * g * c)} vs {_fmt(4 * phi + delta + eps)}")])
    aud.check("tau_from_phi_epsilon", [(12 * tau == delta + 4 * phi - 2 * eps, f"12tau={_fmt(12 * tau)} vs {_fmt(delta + 4 * phi - 2 * eps)}")])
    def constancy(x):
        v = a.green_K(x) + a.pot.diagonal(x)
        return v == c, lambda: f"x={x}: {_fmt(v)} != c={_fmt(c)}"

    def tau_constancy(x):
        v = a.pot0.diagonal(x)
        return v == tau, lambda: f"x={x}: {_fmt(v)} != tau={_fmt(tau)}"

    aud.check("canonical_constancy", (constancy(x) for x in dense))
    aud.check("tau_constancy", (tau_constancy(x) for x in dense))
    pairs = list(zip(pts, pts[1:] + pts[:1]))
    aud.check(
        "tau_two_point",
        (
            (a.pot0.green(x, y) + a.kernel.r(x, y) / 2 == tau, f"x={x}, y={y}")
            for x, y in pairs
        ),
    )

    def moriwaki(x):
        d = a.pot.diagonal(x)
        ok = d == c - a.green_K(x) and d == c + (a.r_K(x) - eps) / (2 * g)
        return ok, f"x={x}: g(x,x)={_fmt(d)}"

    aud.check("moriwaki_identity", (moriwaki(x) for x in pts))
    if a.is_tree:
        aud.check("tree_identity", [(2 * phi == delta + eps, f"2phi={_fmt(2 * phi)} vs delta+eps={_fmt(delta + eps)}")])
    aud.check("epsilon_nonnegative", [(eps >= 0, f"epsilon={_fmt(eps)}")])
    aud.check("profile_continuity", [(not a.profile.continuity_defects(), "diagonal profile discontinuous")])

    return InvariantReport(
        genus=g,
        delta=delta,
        epsilon=eps,
        phi=phi,
        tau=tau,
        lam=a.lam,
        c=c,
        sup_diagonal=sup,
        sup_point=str(sup_at),
        is_tree=a.is_tree,
        audit=aud.entries,
    )


@dataclass
class InequalityEntry:
    name: str
    lhs: Fraction
    rhs: Fraction
    witness: Optional[str] = None
    strict: bool = False

    @property
    def margin(self) -> Fraction:
        return self.rhs - self.lhs

    @property
    def passed(self) -> bool:
        return self.lhs < self.rhs if self.strict else self.lhs <= self.rhs

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "lhs": format_rational(self.lhs),
            "rhs": format_rational(self.rhs),
            "margin": format_rational(self.margin),
            "strict": self.strict,
            "passed": self.passed,
            "witness": self.witness,
        }


@dataclass
class InequalityReport:
    entries: list[InequalityEntry]

    @property
    def failures(self) -> list[InequalityEntry]:
        return [e for e in self.entries if not e.passed]

    def to_dict(self) -> dict:
        return {"entries": [e.to_dict() for e in self.entries]}


def _worst(name, cases) -> InequalityEntry:
    """Entry for the case with the smallest margin ``rhs - lhs``."""
    best = None
    for lhs, rhs, witness in cases:
        if best is None or rhs - lhs < best.margin:
            best = InequalityEntry(name, lhs, rhs, witness)
    return best


def inequality_audit(
    graph: MetrizedGraph,
    pol: Polarization,
    seed: int = 0,
    resistance_pairs: int = 10,
    offdiagonal_pairs: int = 20,
) -> InequalityReport:
    """Evaluate every inequality exactly; report ``lhs <= rhs`` with margins.

    Genus-dependent inequalities are skipped when the genus is below 2.
    """
    a = analyze(graph, pol)
    g, delta, eps, phi, lam = a.g, a.delta, a.epsilon, a.phi, a.lam
    sup = a.sup[0]
    rng = random.Random(f"inequality:{seed}")
    entries = []

    rpairs = [(random_point(graph, rng), random_point(graph, rng)) for _ in range(resistance_pairs)]
    if rpairs:
        entries.append(_worst("resistance_le_4tau", ((a.kernel.r(x, y), 4 * a.tau, f"x={x}, y={y}") for x, y in rpairs)))
    opairs = [(random_point(graph, rng), random_point(graph, rng)) for _ in range(offdiagonal_pairs)]
    green_pairs = [(a.green(x, y), f"x={x}, y={y}") for x, y in opairs]
    if green_pairs:
        entries.append(_worst("offdiagonal_le_diagonal_sup", ((v, sup, w) for v, w in green_pairs)))
    if g >= 2:
        entries.append(InequalityEntry("cinkir", delta, cinkir_constant(g) * phi))
        if a.tree_constants_apply:
            entries.append(InequalityEntry("cinkir_tree", delta, cinkir_constant(g, tree=True) * phi))
        entries.append(InequalityEntry("lambda_bound", g * delta, (8 * g + 4) * lam))
        mid = ((4 * g - 3) * delta + (16 * g - 12) * phi - (8 * g - 3) * eps) / (12 * g)
        entries.append(InequalityEntry("green_sup_by_invariants", sup, mid))
        if green_pairs:
            entries.append(_worst("green_pairs_by_invariants", ((v, mid, w) for v, w in green_pairs)))
        entries.append(InequalityEntry("green_sup_by_phi", mid, green_sup_constant(g) * phi))
        if a.tree_constants_apply:
            entries.append(InequalityEntry("green_sup_by_phi_tree", mid, green_sup_constant(g, tree=True) * phi))
        if graph.edges:
            entries.append(InequalityEntry("phi_positive", Fraction(0), phi, strict=True))
    return InequalityReport(entries)


@dataclass
class ElkiesItem:
    digest: str
    s: int
    pair_sum: Fraction
    sup_bound: Fraction
    phi_bound: Fraction
    tree_phi_bound: Optional[Fraction]

    @property
    def passed(self) -> bool:
        ok = self.pair_sum >= self.sup_bound and self.pair_sum >= self.phi_bound
        if self.tree_phi_bound is not None:
            ok = ok and self.pair_sum >= self.tree_phi_bound
        return ok

    def to_dict(self) -> dict:
        return {
            "digest": self.digest,
            "s": self.s,
            "pairSum": format_rational(self.pair_sum),
            "supBound": format_rational(self.sup_bound),
            "phiBound": format_rational(self.phi_bound),
            "treePhiBound": None if self.tree_phi_bound is None else format_rational(self.tree_phi_bound),
            "passed": self.passed,
        }


@dataclass
class ElkiesReport:
    items: list[ElkiesItem]

    @property
    def total(self) -> Fraction:
        return sum((i.pair_sum for i in self.items), Fraction(0))

    @property
    def total_sup_bound(self) -> Fraction:
        return sum((i.sup_bound for i in self.items), Fraction(0))

    @property
    def total_phi_bound(self) -> Fraction:
        return sum((i.phi_bound for i in self.items), Fraction(0))

    @property
    def passed(self) -> bool:
        return (
            all(i.passed for i in self.items)
            and self.total >= self.total_sup_bound
            and self.total >= self.total_phi_bound
        )

    def to_dict(self) -> dict:
        return {
            "items": [i.to_dict() for i in self.items],
            "total": format_rational(self.total),
            "totalSupBound": format_rational(self.total_sup_bound),
            "totalPhiBound": format_rational(self.total_phi_bound),
            "passed": self.passed,
        }


def elkies_check(
    graphs: Sequence[MetrizedGraph],
    pols: Sequence[Polarization],
    points: Sequence[Sequence[GraphPoint]],
) -> ElkiesReport:
    """Pairwise Green sums against ``-s sup g(x,x)`` and ``-s c'(g) phi``, per graph and summed."""
    sizes = {len(p) for p in points}
    if len(sizes) != 1 or min(sizes) < 2:
        raise ValueError("every graph needs the same number s >= 2 of points")
    items = []
    for graph, pol, pts in zip(graphs, pols, points):
        a = analyze(graph, pol)
        if a.g < 2:
            raise InvalidPolarization(f"genus {a.g} < 2")
        pts = [graph.check_point(p) for p in pts]
        s = len(pts)
        total = Fraction(0)
        for j in range(s):
            for k in range(j + 1, s):
                total += 2 * a.green(pts[j], pts[k])
        tree_bound = -s * green_sup_constant(a.g, tree=True) * a.phi if a.tree_constants_apply else None
        items.append(
            ElkiesItem(graph.digest(), s, total, -s * a.sup[0], -s * green_sup_constant(a.g) * a.phi, tree_bound)
        )
    return ElkiesReport(items)
