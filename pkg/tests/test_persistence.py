import json

import pytest

from conftest import cached_complex, cached_graph

from vorcycle.homology import verify_top_cycle
from vorcycle.persistence import (
    CacheCorrupt,
    cache_path,
    complex_from_payload,
    complex_to_payload,
    content_hash,
    graph_from_payload,
    graph_to_payload,
    load_payload,
    save_payload,
)
from vorcycle.tessellation import TessInstance, sector_fan


def test_graph_round_trip(tmp_path):
    graph = cached_graph(3, "sl")
    payload = graph_to_payload(graph)
    path = save_payload(str(tmp_path / "g.json"), "graph", 3, "sl", payload)
    loaded = graph_from_payload(load_payload(path, "graph", 3, "sl"))
    assert loaded.n == graph.n
    assert loaded.group_kind == graph.group_kind
    assert len(loaded.nodes) == len(graph.nodes)
    for a, b in zip(loaded.nodes, graph.nodes):
        assert a.form.gram == b.form.gram
        assert a.minvecs == b.minvecs
        assert a.stab_order == b.stab_order
        assert {g.rows for g in a.stabilizer} == {g.rows for g in b.stabilizer}
        assert {f.incident for f in a.domain.facets} == \
            {f.incident for f in b.domain.facets}
    assert loaded.edges == graph.edges


def test_complex_round_trip(tmp_path):
    cx = cached_complex(2, "sl")
    payload = complex_to_payload(cx)
    path = save_payload(str(tmp_path / "c.json"), "complex", 2, "sl", payload)
    loaded = complex_from_payload(load_payload(path, "complex", 2, "sl"))
    assert loaded.kept_tops == cx.kept_tops
    assert loaded.kept_walls == cx.kept_walls
    assert loaded.walls == cx.walls
    assert loaded.differential == cx.differential
    assert verify_top_cycle(loaded).ok


def test_verdict_round_trip(tmp_path):
    report = verify_top_cycle(cached_complex(2, "sl")).to_payload()
    path = save_payload(str(tmp_path / "v.json"), "verdict", 2, "sl", report)
    assert load_payload(path, "verdict", 2, "sl") == report


def test_tess_round_trip(tmp_path):
    inst = sector_fan(4).to_payload()
    path = save_payload(str(tmp_path / "t.json"), "tess-instance", 0, "-",
                        inst)
    assert TessInstance.from_payload(
        load_payload(path, "tess-instance")) == sector_fan(4)


def test_save_is_deterministic(tmp_path):
    payload = graph_to_payload(cached_graph(2, "sl"))
    p1 = save_payload(str(tmp_path / "a.json"), "graph", 2, "sl", payload)
    p2 = save_payload(str(tmp_path / "b.json"), "graph", 2, "sl", payload)
    assert open(p1).read() == open(p2).read()


def test_integers_serialized_as_strings():
    payload = graph_to_payload(cached_graph(2, "sl"))
    gram = payload["nodes"][0]["gram"]
    assert all(isinstance(x, str) for row in gram for x in row)


def test_hash_corruption_detected(tmp_path):
    payload = graph_to_payload(cached_graph(2, "sl"))
    path = save_payload(str(tmp_path / "g.json"), "graph", 2, "sl", payload)
    doc = json.load(open(path))
    doc["payload"]["n"] = 5
    with open(path, "w") as fh:
        json.dump(doc, fh)
    with pytest.raises(CacheCorrupt):
        load_payload(path, "graph", 2, "sl")


def test_schema_version_checked(tmp_path):
    payload = {"x": 1}
    path = save_payload(str(tmp_path / "g.json"), "verdict", 2, "sl", payload)
    doc = json.load(open(path))
    doc["schema_version"] = 99
    with open(path, "w") as fh:
        json.dump(doc, fh)
    with pytest.raises(CacheCorrupt):
        load_payload(path)


def test_kind_and_params_checked(tmp_path):
    path = save_payload(str(tmp_path / "g.json"), "verdict", 2, "sl",
                        {"x": 1})
    with pytest.raises(CacheCorrupt):
        load_payload(path, "graph")
    with pytest.raises(CacheCorrupt):
        load_payload(path, "verdict", 3)
    with pytest.raises(CacheCorrupt):
        load_payload(path, "verdict", 2, "gl")


def test_content_hash_canonical():
    assert content_hash({"a": 1, "b": 2}) == content_hash({"b": 2, "a": 1})


def test_cache_path_layout(tmp_path):
    assert cache_path("/c", "graph", 4, "sl") == "/c/graph-n4-sl.json"
    assert cache_path("/c", "complex", 4, "sl", 3) == \
        "/c/complex-n4-sl-p3.json"
