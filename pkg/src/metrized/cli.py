"""Command-line interface: ``metrized {invariants,bounds,verify,green}``.

Graph files are JSON documents::

    {"vertices": ["a", "b"],
     "edges": [{"u": "a", "v": "b", "length": "3/2"}],
     "polarization": {"a": 2, "b": 2}}

Rationals are written ``"n"`` or ``"n/d"``.  A point is a vertex id or
``{"edge": i, "t": "n/d"}``; on the command line an edge point is written
``i@n/d``.  Polarization keys may be vertex ids or ``i@n/d`` strings; a
list of ``{"point": ..., "m": ...}`` records is accepted as well.

Exit codes: 0 success, 1 audit failure, 2 parse or validation error.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
from fractions import Fraction

from . import __version__
from .bounds import count_bound
from .core import (
    EdgePoint,
    MetrizedGraph,
    Polarization,
    build_graph,
    format_rational,
    parse_rational,
    polarize,
    subdivide,
)
from .errors import MetrizedError
from .harmonic import Measure, diagonal_profile, green_function, green_value, tau_measure
from .invariants import analyze, inequality_audit, invariant_report
from .verify import GeneratorParams, campaign

__all__ = ["decimal", "dump_graph", "load_graph", "main", "parse_point"]


class InputError(Exception):
    """Parse or validation failure; ``where`` locates it in the input."""

    def __init__(self, message: str, where: str = ""):
        super().__init__(f"{where}: {message}" if where else message)


# -- ingestion ---------------------------------------------------------


def parse_point(text) -> object:
    """``"v"`` -> vertex, ``"3@1/2"`` or ``{"edge": 3, "t": "1/2"}`` -> edge point."""
    if isinstance(text, dict):
        try:
            return EdgePoint(int(text["edge"]), parse_rational(text["t"]))
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise InputError(f"bad edge point {text!r} ({exc})") from None
    if not isinstance(text, str):
        raise InputError(f"bad point {text!r}")
    edge, sep, t = text.partition("@")
    if not sep:
        return text
    try:
        return EdgePoint(int(edge), parse_rational(t))
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad edge point {text!r} ({exc})") from None


def _raw_point(p):
    """User points refer to raw edges; keep them as (raw index, offset)."""
    return (p.edge, p.t) if isinstance(p, EdgePoint) else p


def load_graph(doc) -> tuple[MetrizedGraph, Polarization]:
    """Build ``(graph, polarization)`` from a parsed document."""
    if not isinstance(doc, dict):
        raise InputError("top level must be an object")
    vertices = doc.get("vertices")
    if not isinstance(vertices, list):
        raise InputError("missing list", "vertices")
    edges = doc.get("edges", [])
    if not isinstance(edges, list):
        raise InputError("must be a list", "edges")
    for i, e in enumerate(edges):
        if not isinstance(e, dict) or not {"u", "v", "length"} <= e.keys():
            raise InputError("expected {u, v, length}", f"edges[{i}]")
        if isinstance(e["length"], float):
            raise InputError(f"float length {e['length']!r}; write it as a string n/d", f"edges[{i}].length")
        try:
            parse_rational(e["length"])
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(str(exc), f"edges[{i}].length") from None
    try:
        graph = build_graph(vertices, edges)
    except MetrizedError as exc:
        raise InputError(str(exc), "graph") from None

    pol_doc = doc.get("polarization", {})
    if isinstance(pol_doc, dict):
        items = [(k, v, f"polarization[{k!r}]") for k, v in pol_doc.items()]
    elif isinstance(pol_doc, list):
        items = []
        for i, rec in enumerate(pol_doc):
            if not isinstance(rec, dict) or "point" not in rec or "m" not in rec:
                raise InputError("expected {point, m}", f"polarization[{i}]")
            items.append((rec["point"], rec["m"], f"polarization[{i}]"))
    else:
        raise InputError("must be an object or a list", "polarization")
    marks = {}
    for key, m, where in items:
        p = parse_point(key)
        if isinstance(m, bool) or not isinstance(m, int) or m < 0:
            raise InputError(f"m must be a non-negative integer, got {m!r}", where)
        try:
            q = graph.from_raw(_raw_point(p))
        except MetrizedError as exc:
            raise InputError(str(exc), where) from None
        marks[q] = marks.get(q, 0) + m
    try:
        return polarize(graph, marks)
    except MetrizedError as exc:
        raise InputError(str(exc), "polarization") from None


def dump_graph(graph: MetrizedGraph, pol: Polarization) -> dict:
    """Document for ``graph``; re-ingesting it gives an isometric graph."""
    return {
        "vertices": list(graph.vertices),
        "edges": [{"u": e.u, "v": e.v, "length": format_rational(e.length)} for e in graph.edges],
        "polarization": dict(pol.m),
    }


def _read_document(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(str(exc), path) from None
    try:
        return json.loads(text), hashlib.sha256(text.encode()).hexdigest()[:16]
    except json.JSONDecodeError as exc:
        raise InputError(exc.msg, f"{path}:{exc.lineno}:{exc.colno}") from None


# -- emission ----------------------------------------------------------


def decimal(q: Fraction, places: int) -> str:
    """Round-half-even decimal rendering of an exact rational."""
    n = round(Fraction(q) * 10**places)
    sign = "-" if n < 0 else ""
    digits = str(abs(n)).rjust(places + 1, "0")
    if not places:
        return sign + digits
    return f"{sign}{digits[:-places]}.{digits[-places:]}"


def _record(command: str, exact: dict, approx: int | None, **meta) -> dict:
    rec = {"command": command, "metadata": {"version": __version__, **meta}, "exact": exact}
    if approx is not None:
        rec["approx"] = {
            k: decimal(parse_rational(v), approx)
            for k, v in exact.items()
            if isinstance(v, str) and _is_rational(v)
        }
    return rec


def _is_rational(text: str) -> bool:
    try:
        parse_rational(text)
    except (ValueError, ZeroDivisionError):
        return False
    return True


def _rows(prefix: str, value):
    if isinstance(value, dict):
        for k, v in value.items():
            yield from _rows(f"{prefix}.{k}" if prefix else str(k), v)
    elif isinstance(value, list):
        for i, v in enumerate(value):
            yield from _rows(f"{prefix}[{i}]", v)
    else:
        yield prefix, value


def _emit(record: dict, fmt: str, out: str | None):
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["key", "value"])
        for key, value in _rows("", record):
            writer.writerow([key, "" if value is None else value])
        text = buf.getvalue()
    else:
        text = json.dumps(record, indent=2) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- commands ----------------------------------------------------------


def cmd_invariants(args) -> int:
    doc, digest = _read_document(args.file)
    graph, pol = load_graph(doc)
    report = invariant_report(graph, pol)
    exact = report.to_dict()
    ok = not report.failures
    if pol.genus >= 2:
        ineq = inequality_audit(graph, pol, seed=args.seed)
        exact["inequalities"] = ineq.to_dict()["entries"]
        ok = ok and not ineq.failures
    _emit(_record("invariants", exact, args.approx, inputDigest=digest, seed=args.seed), args.format, args.out)
    return 0 if ok else 1


def cmd_bounds(args) -> int:
    report = count_bound(args.genus, args.epsilon, tree=args.tree, halving=args.halving, good_reduction=args.good_reduction)
    _emit(_record("bounds", report.to_dict(), args.approx), args.format, args.out)
    return 0


def cmd_verify(args) -> int:
    if args.count < 1:
        raise InputError("must be >= 1", "--count")
    try:
        points = tuple(int(s) for s in args.points.split(","))
        params = GeneratorParams(
            max_vertices=args.max_vertices,
            max_edges=args.max_edges,
            tree_only=args.tree_only,
            curve_type=args.curve_type,
            points_per_elkies_check=points,
        )
    except ValueError as exc:
        raise InputError(str(exc), "generator parameters") from None
    report = campaign(args.seed, args.count, params)
    record = _record("verify", report.to_dict(timing=not args.no_timing), None, seed=args.seed)
    _emit(record, args.format, args.out)
    for f in report.failures:
        print(f"FAIL seed={f['seed']} index={f['index']} {f['check']}: {f['witness']}", file=sys.stderr)
    return 0 if not report.failures else 1


def _point_on(graph: MetrizedGraph, text: str, flag: str):
    try:
        return graph.from_raw(_raw_point(parse_point(text)))
    except MetrizedError as exc:
        raise InputError(str(exc), flag) from None


def cmd_green(args) -> int:
    doc, digest = _read_document(args.file)
    graph, pol = load_graph(doc)
    kind, _, where = args.measure.partition(":")
    if kind == "canonical":
        mu = analyze(graph, pol).mu
    elif kind == "tau":
        mu = tau_measure(graph)
    elif kind == "dirac" and where:
        p = _point_on(graph, where, "--measure")
        if isinstance(p, EdgePoint):
            graph, p = subdivide(graph, p)
        mu = Measure.dirac(graph, p)
    else:
        raise InputError(f"unknown measure {args.measure!r}", "--measure")
    x = _point_on(graph, args.x, "--x")
    meta = {"inputDigest": digest, "measure": args.measure}
    if args.y is None:
        if kind == "canonical":
            profile = analyze(graph, pol).profile
        else:
            profile = diagonal_profile(graph, mu)
        table = [{k: format_rational(v) if isinstance(v, Fraction) else v for k, v in row.items()} for row in profile.table()]
        value, at = profile.maximum()
        exact = {"x": str(x), "sup": format_rational(value), "supPoint": str(at), "diagonalTable": table}
        _emit(_record("green", exact, args.approx, **meta), args.format, args.out)
        return 0
    y = _point_on(graph, args.y, "--y")
    laplacian = green_function(graph, mu, x)(y)
    jfun = green_value(graph, mu, x, y)
    exact = {"x": str(x), "y": str(y), "value": format_rational(laplacian), "enginesAgree": laplacian == jfun}
    _emit(_record("green", exact, args.approx, **meta), args.format, args.out)
    return 0 if laplacian == jfun else 1


def _places(text: str) -> int:
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError("precision must be >= 0")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="metrized", description="Exact invariants of polarized metrized graphs.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--approx", type=_places, metavar="N", help="add decimals rounded to N places")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("invariants", parents=[common], help="invariants, identity audit and inequality audit")
    p.add_argument("file")
    p.add_argument("--seed", type=int, default=0, help="seed for sampled inequality points")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("bounds", parents=[common], help="bound constants for a genus")
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--epsilon", default="0")
    p.add_argument("--tree", action="store_true")
    p.add_argument("--halving", action="store_true")
    p.add_argument("--good-reduction", action="store_true")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("verify", parents=[common], help="random identity and inequality campaign")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--max-vertices", type=int, default=10)
    p.add_argument("--max-edges", type=int, default=13)
    p.add_argument("--tree-only", action="store_true")
    p.add_argument("--curve-type", action="store_true", help="only even m (m = 2q)")
    p.add_argument("--points", default="2,3,5", help="comma-separated point counts for the pair-sum checks")
    p.add_argument("--no-timing", action="store_true", help="omit wall-clock timing from the report")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("green", parents=[common], help="Green function values or diagonal table")
    p.add_argument("file")
    p.add_argument("--measure", default="canonical", help="canonical, tau or dirac:<point>")
    p.add_argument("--x", required=True)
    p.add_argument("--y")
    p.set_defaults(func=cmd_green)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, MetrizedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
