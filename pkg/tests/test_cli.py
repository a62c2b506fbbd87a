import json
import subprocess
import sys
from fractions import Fraction

import pytest

from metrized.cli import InputError, decimal, dump_graph, load_graph, main, parse_point
from metrized.core import EdgePoint
from metrized.invariants import invariant_report
from metrized.verify import random_graph


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_invariants_segment(capsys, data_dir):
    code, out, _ = run(capsys, "invariants", str(data_dir / "segment.json"), "--approx", "6")
    assert code == 0
    rec = json.loads(out)
    ex = rec["exact"]
    assert (ex["epsilon"], ex["phi"], ex["delta"], ex["tau"], ex["c"]) == ("1", "1", "1", "1/4", "1/4")
    assert rec["approx"]["lambda"] == "0.200000"
    assert rec["metadata"]["version"] and rec["metadata"]["inputDigest"]


def test_bad_length_exits_2(capsys, tmp_path):
    p = tmp_path / "g.json"
    p.write_text('{"vertices": ["a", "b"], "edges": [{"u": "a", "v": "b", "length": "1/0"}]}')
    code, _, err = run(capsys, "invariants", str(p))
    assert code == 2 and "edges[0].length" in err


def test_syntax_error_reports_position(capsys, tmp_path):
    p = tmp_path / "g.json"
    p.write_text('{"vertices": ["a",\n ]}')
    code, _, err = run(capsys, "invariants", str(p))
    assert code == 2 and ":2:" in err


@pytest.mark.parametrize(
    "doc, where",
    [
        ({"edges": []}, "vertices"),
        ({"vertices": ["a", "b"], "edges": [{"u": "a", "v": "b"}]}, "edges[0]"),
        ({"vertices": ["a", "b"], "edges": [{"u": "a", "v": "b", "length": 0.5}]}, "edges[0].length"),
        ({"vertices": ["a", "b"], "edges": [{"u": "a", "v": "c", "length": "1"}]}, "graph"),
        ({"vertices": ["a", "b"], "edges": [{"u": "a", "v": "b", "length": "1"}], "polarization": {"a": -1}}, "polarization"),
        ({"vertices": ["a", "b"], "edges": [{"u": "a", "v": "b", "length": "1"}], "polarization": {"a": 1, "b": 2}}, "polarization"),
        ({"vertices": ["a", "b"], "edges": [{"u": "a", "v": "b", "length": "1"}], "polarization": {"5@1/2": 2}}, "polarization"),
    ],
)
def test_validation_errors_name_their_location(doc, where):
    with pytest.raises(InputError) as info:
        load_graph(doc)
    assert where in str(info.value)


def test_polarization_at_edge_point():
    doc = {
        "vertices": ["a", "b"],
        "edges": [{"u": "a", "v": "b", "length": "2"}],
        "polarization": [{"point": "a", "m": 1}, {"point": "b", "m": 1}, {"point": {"edge": 0, "t": "1/2"}, "m": 2}],
    }
    graph, pol = load_graph(doc)
    assert len(graph.vertices) == 3 and pol.genus == 2


def test_roundtrip_preserves_invariants():
    for seed in range(5):
        graph, pol = random_graph(seed)
        doc = json.loads(json.dumps(dump_graph(graph, pol)))
        graph2, pol2 = load_graph(doc)
        assert graph2.digest() == graph.digest()
        assert invariant_report(graph2, pol2).vector == invariant_report(graph, pol).vector


def test_bounds_command(capsys):
    assert json.loads(run(capsys, "bounds", "--genus", "2")[1])["exact"]["value"] == 76
    assert json.loads(run(capsys, "bounds", "--genus", "3")[1])["exact"]["value"] == 231
    assert json.loads(run(capsys, "bounds", "--genus", "2", "--tree")[1])["exact"]["value"] == 11
    assert json.loads(run(capsys, "bounds", "--genus", "3", "--halving")[1])["exact"]["value"] == 116
    assert json.loads(run(capsys, "bounds", "--genus", "4", "--good-reduction")[1])["exact"]["value"] == 1
    code, out, _ = run(capsys, "bounds", "--genus", "2", "--epsilon", "1/24", "--approx", "3")
    assert json.loads(out)["approx"]["epsilon"] == "0.042"
    assert run(capsys, "bounds", "--genus", "2", "--epsilon", "1/3")[0] == 2
    assert run(capsys, "bounds", "--genus", "1")[0] == 2


def test_green_command(capsys, data_dir):
    circle = str(data_dir / "circle.json")
    code, out, _ = run(capsys, "green", circle, "--x", "p", "--y", "0@1/2")
    rec = json.loads(out)
    assert code == 0 and rec["exact"]["value"] == "-1/24" and rec["exact"]["enginesAgree"]
    code, out, _ = run(capsys, "green", str(data_dir / "segment.json"), "--measure", "dirac:a", "--x", "0@1/3", "--y", "0@1/3")
    assert json.loads(out)["exact"]["value"] == "1/3"
    code, out, _ = run(capsys, "green", circle, "--measure", "tau", "--x", "p")
    assert json.loads(out)["exact"]["sup"] == "1/12"
    assert run(capsys, "green", circle, "--x", "nowhere")[0] == 2
    assert run(capsys, "green", circle, "--x", "7@1/2")[0] == 2
    assert run(capsys, "green", circle, "--measure", "bogus", "--x", "p")[0] == 2


def test_verify_command(capsys, tmp_path):
    out = tmp_path / "report.json"
    code, _, _ = run(capsys, "verify", "--seed", "5", "--count", "3", "--out", str(out))
    assert code == 0
    rec = json.loads(out.read_text())
    assert rec["exact"]["count"] == 3 and rec["exact"]["failures"] == []
    assert run(capsys, "verify", "--count", "0")[0] == 2
    assert run(capsys, "verify", "--count", "1", "--points", "1")[0] == 2


def test_csv_output(capsys):
    code, out, _ = run(capsys, "bounds", "--genus", "2", "--format", "csv")
    lines = out.splitlines()
    assert lines[0] == "key,value" and "exact.value,76" in lines


@pytest.mark.parametrize(
    "q, places, text",
    [
        (Fraction(1, 8), 2, "0.12"),
        (Fraction(3, 8), 2, "0.38"),
        (Fraction(-1, 8), 2, "-0.12"),
        (Fraction(5, 2), 0, "2"),
        (Fraction(1, 3), 4, "0.3333"),
        (Fraction(-7, 3), 1, "-2.3"),
        (Fraction(1, 200), 2, "0.00"),
    ],
)
def test_decimal_is_round_half_even(q, places, text):
    assert decimal(q, places) == text


def test_parse_point():
    assert parse_point("v") == "v"
    assert parse_point("2@3/4") == EdgePoint(2, Fraction(3, 4))
    assert parse_point({"edge": 1, "t": "1/2"}) == EdgePoint(1, Fraction(1, 2))
    with pytest.raises(InputError):
        parse_point("x@y")


def test_console_module_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "metrized.cli", "bounds", "--genus", "2"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0 and '"value": 76' in proc.stdout
