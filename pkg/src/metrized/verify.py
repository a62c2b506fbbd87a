"""Seeded random polarized graphs and the exact identity/inequality campaign."""
from __future__ import annotations

import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from .core import (
    EdgePoint,
    MetrizedGraph,
    Polarization,
    build_graph,
    first_betti,
    format_rational,
    polarize,
    subdivide,
)
from .errors import GenerationFailure, MetrizedError
from .harmonic import Measure, effective_resistance, green_function, j_function
from .invariants import (
    analyze,
    elkies_check,
    inequality_audit,
    invariant_report,
    random_point,
)

__all__ = ["CampaignReport", "GeneratorParams", "campaign", "check_instance", "instance_seed", "random_graph"]


@dataclass(frozen=True)
class GeneratorParams:
    max_vertices: int = 10
    max_edges: int = 13
    length_denominator_bound: int = 12
    tree_only: bool = False
    genus_min: int = 2
    curve_type: bool = False
    points_per_elkies_check: tuple[int, ...] = (2, 3, 5)

    def __post_init__(self):
        pts = self.points_per_elkies_check
        if isinstance(pts, int):
            pts = (pts,)
        object.__setattr__(self, "points_per_elkies_check", tuple(pts))
        if min(self.max_vertices, self.max_edges, self.length_denominator_bound, self.genus_min) < 1:
            raise ValueError("generator bounds must be >= 1")
        if self.max_edges < self.max_vertices - 1:
            raise ValueError("max_edges must be at least max_vertices - 1")
        if not pts or min(pts) < 2:
            raise ValueError("Elkies checks need s >= 2 points")


def instance_seed(seed, index: int) -> str:
    return f"{seed}/{index}"


def random_graph(seed, params: GeneratorParams = GeneratorParams()) -> tuple[MetrizedGraph, Polarization]:
    """Random connected multigraph with a random polarization of genus >= ``params.genus_min``.

    A random recursive spanning tree gets extra random edges (loops and
    parallels allowed) unless ``tree_only``.  Leaves get ``m >= 1``; parity
    and genus are repaired by incrementing ``m`` at uniformly chosen
    vertices.  With ``curve_type`` every ``m`` is even (``m = 2q``) and
    repairs add 2.
    """
    rng = random.Random(f"graph:{seed}")
    D = params.length_denominator_bound
    n = rng.randint(min(2, params.max_vertices), params.max_vertices)
    names = [f"v{i}" for i in range(n)]
    pairs = [(rng.randrange(i), i) for i in range(1, n)]
    if not params.tree_only:
        for _ in range(rng.randint(0, params.max_edges - (n - 1))):
            pairs.append((rng.randrange(n), rng.randrange(n)))
    edges = [(names[a], names[b], Fraction(rng.randint(1, 2 * D), rng.randint(1, D))) for a, b in pairs]
    valence = [0] * n
    for a, b in pairs:
        valence[a] += 1
        valence[b] += 1
    step = 2 if params.curve_type else 1
    choices = (0, 0, 2) if params.curve_type else (0, 0, 0, 1, 2)
    m = [rng.choice(choices) for _ in range(n)]
    for i in range(n):
        need = 2 - valence[i]
        if m[i] < need:
            m[i] = need + (need % 2 if params.curve_type else 0)

    def genus2():
        return 2 * len(pairs) - 2 * n + sum(m) + 2  # 2g

    for _ in range(4 * params.genus_min + 8):
        if genus2() % 2 == 0 and genus2() // 2 >= params.genus_min:
            break
        m[rng.randrange(n)] += step
    else:
        raise GenerationFailure(f"could not reach genus {params.genus_min} for seed {seed!r}")
    graph = build_graph(names, edges)
    return polarize(graph, {names[i]: m[i] for i in range(n) if m[i]})


def _fail(failures, name, witness):
    failures.append({"check": name, "witness": witness})


def check_instance(seed, index: int, params: GeneratorParams) -> dict:
    """Run every exact check on one generated instance; returns a JSON-ready record."""
    graph, pol = random_graph(instance_seed(seed, index), params)
    rng = random.Random(f"checks:{instance_seed(seed, index)}")
    failures: list[dict] = []
    try:
        _run_checks(graph, pol, rng, params, failures, record := {})
    except MetrizedError as exc:
        _fail(failures, "exception", f"{type(exc).__name__}: {exc}")
        record = {}
    record.update({"index": index, "digest": graph.digest(), "failures": failures})
    return record


def _run_checks(graph, pol, rng, params, failures, record):
    a = analyze(graph, pol)
    kernel = a.kernel
    report = invariant_report(graph, pol)
    for entry in report.failures:
        _fail(failures, entry.name, entry.witness)
    ineq = inequality_audit(graph, pol, seed=rng.randrange(2**32))
    for entry in ineq.failures:
        _fail(failures, entry.name, f"{entry.witness}: lhs={format_rational(entry.lhs)} rhs={format_rational(entry.rhs)}")
    if a.c_integral != a.c_formula:
        _fail(failures, "c_dual_path", "integral and formula differ")

    raw_m = sum(pol.m.values())
    if 2 * pol.genus != 2 * first_betti(graph) + raw_m:
        _fail(failures, "genus_additivity", f"g={pol.genus}, b1={first_betti(graph)}, sum m={raw_m}")

    foster = sum((kernel.r(e.u, e.v) / e.length for e in graph.edges), Fraction(0))
    if foster != len(graph.vertices) - 1:
        _fail(failures, "foster", f"sum = {foster}")

    elkies = {}
    for s in params.points_per_elkies_check:
        pts = [random_point(graph, rng) for _ in range(s)]
        rep = elkies_check([graph], [pol], [pts])
        elkies[s] = rep.items[0].to_dict()
        if not rep.passed:
            _fail(failures, f"elkies_s{s}", f"points={[str(p) for p in pts]}")

    x, y, z = (random_point(graph, rng) for _ in range(3))
    gx = green_function(graph, a.mu, x)
    gy = green_function(graph, a.mu, y)
    for name, gf in (("x", gx), ("y", gy)):
        if gf.balance_defects() or gf.curvature_defects():
            _fail(failures, "green_balance", f"base {name}={gf.x}")
        if gf.normalization() != 0:
            _fail(failures, "green_normalization", f"base {name}: {gf.normalization()}")
    if gx(y) != gy(x):
        _fail(failures, "green_symmetry", f"x={x}, y={y}")
    for w in (y, z):
        if gx(w) != a.green(x, w):
            _fail(failures, "dual_engine", f"x={x}, y={w}: laplacian {gx(w)} vs j-function {a.green(x, w)}")

    r_direct = effective_resistance(graph, x, y)
    gx_sub, xv = subdivide(graph, x)
    r_green = green_function(gx_sub, Measure.dirac(gx_sub, xv), gx_sub.transfer(y, graph))
    if not (r_direct == kernel.r(x, y) == r_green(gx_sub.transfer(y, graph))):
        _fail(failures, "resistance_dual_path", f"x={x}, y={y}")
    j = j_function(graph, z, x, y)
    if j != (kernel.r(x, z) + kernel.r(y, z) - kernel.r(x, y)) / 2:
        _fail(failures, "j_function_identity", f"zeta={z}, x={x}, y={y}")

    # subdivision invariance
    p = random_point(graph, rng)
    g2, _ = subdivide(graph, p)
    a2 = analyze(g2, pol.on(g2))
    vec = (a.delta, a.epsilon, a.phi, a.tau, a.lam, a.c_integral, a.sup[0])
    vec2 = (a2.delta, a2.epsilon, a2.phi, a2.tau, a2.lam, a2.c_integral, a2.sup[0])
    if vec != vec2 or a2.kernel.r(g2.transfer(x, graph), g2.transfer(y, graph)) != kernel.r(x, y):
        _fail(failures, "subdivision_invariance", f"split at {p}")

    # scaling homogeneity
    lam = Fraction(rng.randint(1, 7), rng.randint(1, 7))
    g3 = graph.scaled(lam)
    a3 = analyze(g3, pol.on(g3))
    x3, y3 = (EdgePoint(q.edge, lam * q.t) if isinstance(q, EdgePoint) else q for q in (x, y))
    vec3 = (a3.delta, a3.epsilon, a3.phi, a3.tau, a3.lam, a3.c_integral, a3.sup[0])
    if vec3 != tuple(lam * v for v in vec) or a3.kernel.r(x3, y3) != lam * kernel.r(x, y):
        _fail(failures, "scaling_homogeneity", f"factor {lam}")

    record["report"] = report.to_dict()
    record["inequalities"] = ineq.to_dict()["entries"]
    record["elkies"] = {str(s): v for s, v in elkies.items()}


@dataclass
class CampaignReport:
    seed: object
    count: int
    params: GeneratorParams
    per_graph: list[dict] = field(default_factory=list)
    timing: dict = field(default_factory=dict)

    @property
    def failures(self) -> list[dict]:
        out = []
        for rec in self.per_graph:
            for f in rec["failures"]:
                out.append({"seed": self.seed, "index": rec["index"], "digest": rec["digest"], **f})
        return out

    def to_dict(self, timing: bool = True) -> dict:
        out = {
            "seed": self.seed,
            "count": self.count,
            "params": asdict(self.params),
            "perGraph": self.per_graph,
            "failures": self.failures,
        }
        if timing:
            out["timing"] = self.timing
        return out


def _worker(args):
    return check_instance(*args)


def campaign(seed, count: int, params: GeneratorParams = GeneratorParams(), workers: int | None = None) -> CampaignReport:
    """Generate ``count`` instances and run every exact check on each.

    ``workers`` defaults to the ``MG_THREADS`` environment variable (1 if
    unset).  Results are ordered by index whatever the parallelism.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if workers is None:
        workers = int(os.environ.get("MG_THREADS", "1"))
    jobs = [(seed, i, params) for i in range(count)]
    start = time.perf_counter()
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_worker, jobs, chunksize=8))
    else:
        records = [_worker(j) for j in jobs]
    elapsed = time.perf_counter() - start
    return CampaignReport(seed, count, params, records, {"seconds": round(elapsed, 3), "workers": workers})
