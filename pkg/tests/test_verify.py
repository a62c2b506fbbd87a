import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from metrized import first_betti, total_length
from metrized.verify import GeneratorParams, campaign, check_instance, random_graph


def test_params_validation():
    with pytest.raises(ValueError):
        GeneratorParams(max_vertices=0)
    with pytest.raises(ValueError):
        GeneratorParams(max_vertices=5, max_edges=3)
    with pytest.raises(ValueError):
        GeneratorParams(points_per_elkies_check=(1,))
    assert GeneratorParams(points_per_elkies_check=4).points_per_elkies_check == (4,)


def test_smallest_tree_is_a_segment():
    graph, pol = random_graph(1, GeneratorParams(max_vertices=2, max_edges=1, tree_only=True))
    assert len(graph.vertices) == 2 and len(graph.edges) == 1
    assert pol.genus >= 2
    assert all(pol.m.get(v, 0) >= 1 for v in graph.vertices)


@given(st.integers(0, 10**6))
def test_generator_contract(seed):
    params = GeneratorParams(max_vertices=6, max_edges=9, genus_min=3)
    graph, pol = random_graph(seed, params)
    assert pol.genus >= 3
    assert pol.K.degree % 2 == 0
    for e in graph.edges:
        # loops are stored as two halves
        assert (2 * e.length).denominator <= params.length_denominator_bound
    again, pol2 = random_graph(seed, params)
    assert again.digest() == graph.digest() and pol2.m == pol.m


@given(st.integers(0, 10**6))
def test_tree_only_and_curve_type(seed):
    graph, pol = random_graph(seed, GeneratorParams(tree_only=True, curve_type=True))
    assert first_betti(graph) == 0
    assert all(m % 2 == 0 for m in pol.m.values())
    assert total_length(graph) > 0


def test_campaign_rejects_empty():
    with pytest.raises(ValueError):
        campaign(0, 0)


def test_small_campaign_is_clean():
    report = campaign(7, 12)
    assert report.failures == []
    assert [r["index"] for r in report.per_graph] == list(range(12))
    rec = report.per_graph[0]
    assert {"report", "inequalities", "elkies", "digest"} <= rec.keys()
    assert set(rec["elkies"]) == {"2", "3", "5"}


def test_tree_campaign_runs_tree_audits():
    report = campaign(3, 8, GeneratorParams(tree_only=True, curve_type=True))
    assert report.failures == []
    for rec in report.per_graph:
        names = {a["name"] for a in rec["report"]["identityAudit"]}
        assert "tree_identity" in names
        assert any(e["name"] == "cinkir_tree" for e in rec["inequalities"])


def test_campaign_is_deterministic_and_order_stable(monkeypatch):
    serial = campaign("s", 6, workers=1).to_dict(timing=False)
    monkeypatch.setenv("MG_THREADS", "2")
    parallel = campaign("s", 6).to_dict(timing=False)
    assert json.dumps(serial, sort_keys=True) == json.dumps(parallel, sort_keys=True)


def test_instance_is_reproducible_from_its_witness():
    params = GeneratorParams(max_vertices=4, max_edges=5)
    first = campaign(11, 3, params).per_graph[2]
    assert check_instance(11, 2, params) == first
