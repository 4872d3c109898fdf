"""Tests for recipe replay, dataset generation, splits, and summaries."""

import hashlib
import json
from pathlib import Path

import pytest

import aigpipe.pipeline as pipeline
from aigpipe.aig import Aig, and_tree
from aigpipe.bench import parse_bench, write_bench
from aigpipe.corpus import make_corpus, write_corpus
from aigpipe.pipeline import (
    SAMPLE_NAME_RE,
    GenerateResult,
    PipelineError,
    SampleLabel,
    design_table,
    final_qor_table,
    generate_dataset,
    label_from_json,
    load_manifest,
    make_splits,
    run_recipe,
    split_from_json,
    topk_inputs,
)
from aigpipe.recipe import TransformToken, sample_recipes, top_k_overlap

T = TransformToken


def chain_aig(width):
    g = Aig()
    lit = g.add_pi("x0")
    for i in range(1, width):
        lit = g.add_and(lit, g.add_pi(f"x{i}"))
    g.add_po("y", lit)
    return g


# -- run_recipe ---------------------------------------------------------------


def test_run_recipe_balance_chain():
    g = chain_aig(8)
    steps = run_recipe(g, [T.B], verify=True)
    assert len(steps) == 2
    assert [s.depth for _, _, s in steps] == [7, 3]
    assert steps[0][1] is g


def test_run_recipe_empty():
    g = chain_aig(4)
    steps = run_recipe(g, [])
    assert len(steps) == 1
    assert steps[0][2] == g.stats()


def test_run_recipe_twenty_tokens():
    _, g = make_corpus(1, seed=77)[0]
    recipe = sample_recipes(1, 20, seed=5)[0]
    steps = run_recipe(g, recipe, verify=True)
    assert len(steps) == 21
    assert [sid for sid, _, _ in steps] == list(range(21))
    nodes = [s.and_count for _, _, s in steps]
    assert all(b <= a for a, b in zip(nodes, nodes[1:]))


def test_run_recipe_failure_names_step(monkeypatch):
    calls = []

    def boom(aig, token):
        calls.append(token)
        raise RuntimeError("synthetic fault")

    monkeypatch.setattr(pipeline, "apply_token", boom)
    with pytest.raises(PipelineError, match=r"step 1 \(rw\)"):
        run_recipe(chain_aig(4), [T.RW])


# -- dataset generation -------------------------------------------------------


@pytest.fixture(scope="module")
def dataset(tmp_path_factory):
    root = tmp_path_factory.mktemp("dataset")
    designs_dir = root / "designs"
    write_corpus(designs_dir, make_corpus(2, seed=12))
    out = root / "out"
    result = generate_dataset(
        designs_dir, recipe_count=10, recipe_length=20, seed=3, out_dir=out
    )
    return result


def test_dataset_arithmetic(dataset):
    # 2 designs x 10 recipes x 21 steps = 420 pairs
    assert len(dataset.rows) == 420
    graphmls = sorted(dataset.out_dir.glob("*.graphml"))
    jsons = sorted(dataset.out_dir.glob("*.json"))
    assert len(graphmls) == 420 and len(jsons) == 420
    assert dataset.failures == ()
    for p in graphmls + jsons:
        assert SAMPLE_NAME_RE.match(p.name), p.name


def test_dataset_manifest(dataset):
    rows = load_manifest(dataset.manifest_path)
    assert rows == list(dataset.rows)
    header = dataset.manifest_path.read_text(encoding="utf-8").splitlines()[0]
    assert header == "ip,recipe_id,step_id,nodes,depth,graphml,json"
    keys = [(r["ip"], r["recipe_id"], r["step_id"]) for r in rows]
    assert keys == sorted(keys)
    recipes_file = dataset.out_dir / "recipes.txt"
    assert len(recipes_file.read_text(encoding="utf-8").splitlines()) == 10


def test_dataset_labels(dataset):
    rows = load_manifest(dataset.manifest_path)
    by_key = {(r["ip"], r["recipe_id"], r["step_id"]): r for r in rows}
    ip, rid = rows[0]["ip"], rows[0]["recipe_id"]
    final = by_key[(ip, rid, 20)]
    for sid in range(21):
        row = by_key[(ip, rid, sid)]
        label = label_from_json(
            (dataset.out_dir / row["json"]).read_text(encoding="utf-8")
        )
        assert label.ip_name == ip and label.recipe_id == rid
        assert label.step_id == sid
        assert len(label.recipe_tokens) == 20
        assert label.nodes == row["nodes"] and label.depth == row["depth"]
        assert label.final_nodes == final["nodes"]
        assert label.area_proxy == final["nodes"]
        assert label.delay_proxy == final["depth"]
        assert label.edges == 2 * label.nodes + label.pos


def test_label_field_order(dataset):
    row = load_manifest(dataset.manifest_path)[0]
    text = (dataset.out_dir / row["json"]).read_text(encoding="utf-8")
    assert list(json.loads(text)) == [
        "ip_name", "recipe_id", "step_id", "recipe_tokens",
        "pis", "pos", "nodes", "inverters", "edges", "depth",
        "final_nodes", "area_proxy", "delay_proxy",
    ]


def test_graphml_label_consistency(dataset):
    rows = load_manifest(dataset.manifest_path)
    for row in rows[:30]:
        text = (dataset.out_dir / row["graphml"]).read_text(encoding="utf-8")
        label = label_from_json(
            (dataset.out_dir / row["json"]).read_text(encoding="utf-8")
        )
        const_nodes = text.count('<node id="0">')
        assert text.count("<node ") == label.pis + label.pos + label.nodes + const_nodes
        assert text.count("<edge ") == label.edges


def _tree_digest(out_dir):
    h = hashlib.sha256()
    for p in sorted(Path(out_dir).iterdir()):
        h.update(p.name.encode())
        h.update(p.read_bytes())
    return h.hexdigest()


def test_dataset_determinism_and_parallel(tmp_path):
    designs_dir = tmp_path / "designs"
    write_corpus(designs_dir, make_corpus(2, seed=21))
    digests = []
    for name, jobs in (("a", 1), ("b", 1), ("c", 2)):
        result = generate_dataset(
            designs_dir, recipe_count=3, recipe_length=5, seed=8,
            out_dir=tmp_path / name, jobs=jobs,
        )
        assert len(result.rows) == 2 * 3 * 6
        digests.append(_tree_digest(result.out_dir))
    assert digests[0] == digests[1] == digests[2]


def test_dataset_skips_bad_design(tmp_path):
    designs_dir = tmp_path / "designs"
    write_corpus(designs_dir, make_corpus(1, seed=33))
    (designs_dir / "broken.bench").write_text("y = FROB(a)\n", encoding="utf-8")
    result = generate_dataset(
        designs_dir, recipe_count=2, recipe_length=3, seed=1,
        out_dir=tmp_path / "out",
    )
    assert len(result.failures) == 1
    assert result.failures[0][0] == "broken.bench"
    assert {r["ip"] for r in result.rows} == {"rand00"}


def test_dataset_empty_dir(tmp_path):
    (tmp_path / "designs").mkdir()
    with pytest.raises(PipelineError):
        generate_dataset(
            tmp_path / "designs", recipe_count=1, recipe_length=1, seed=0,
            out_dir=tmp_path / "out",
        )


def test_dataset_verify_small_design(tmp_path):
    designs_dir = tmp_path / "designs"
    write_corpus(designs_dir, make_corpus(1, seed=50, max_pis=8, max_gates=60))
    result = generate_dataset(
        designs_dir, recipe_count=2, recipe_length=6, seed=2,
        out_dir=tmp_path / "out", verify=True,
    )
    assert len(result.rows) == 2 * 7


# -- splits -------------------------------------------------------------------


def test_splits_variant1(dataset):
    sm = make_splits(dataset.manifest_path, variant=1, train_recipe_count=7)
    assert sm.variant == 1
    assert len(sm.train) == 2 * 7 and len(sm.test) == 2 * 3
    assert set(sm.train).isdisjoint(sm.test)
    assert {rid for _, rid in sm.train} == set(range(7))
    universe = {(r["ip"], r["recipe_id"]) for r in dataset.rows}
    assert set(sm.train) | set(sm.test) == universe


def test_splits_variant1_validation(dataset):
    with pytest.raises(PipelineError):
        make_splits(dataset.manifest_path, variant=1, train_recipe_count=10)
    with pytest.raises(PipelineError):
        make_splits(dataset.manifest_path, variant=1, train_recipe_count=0)
    with pytest.raises(PipelineError):
        make_splits(dataset.manifest_path, variant=1)


def test_splits_variant2_explicit(dataset):
    ips = sorted({r["ip"] for r in dataset.rows})
    sm = make_splits(dataset.manifest_path, variant=2, small_ips=[ips[0]])
    assert {ip for ip, _ in sm.train} == {ips[0]}
    assert {ip for ip, _ in sm.test} == {ips[1]}
    with pytest.raises(PipelineError):
        make_splits(dataset.manifest_path, variant=2, small_ips=ips)
    with pytest.raises(PipelineError):
        make_splits(dataset.manifest_path, variant=2, small_ips=["nope"])


def test_splits_variant2_median(dataset):
    table = design_table(dataset.manifest_path)
    sizes = {row["ip"]: row["nodes"] for row in table}
    assert len(set(sizes.values())) == 2, "corpus designs should differ in size"
    sm = make_splits(dataset.manifest_path, variant=2)
    small = min(sizes, key=sizes.get)
    assert {ip for ip, _ in sm.train} == {small}


def test_splits_variant3(dataset):
    sm = make_splits(dataset.manifest_path, variant=3, seed=4)
    for ip in {p[0] for p in sm.train}:
        assert sum(1 for q, _ in sm.train if q == ip) == 7
        assert sum(1 for q, _ in sm.test if q == ip) == 3
    again = make_splits(dataset.manifest_path, variant=3, seed=4)
    assert sm == again
    other = make_splits(dataset.manifest_path, variant=3, seed=5)
    assert sm != other


def test_splits_variant3_validation(dataset):
    with pytest.raises(PipelineError):
        make_splits(dataset.manifest_path, variant=3, train_fraction=0.01)
    with pytest.raises(PipelineError):
        make_splits(dataset.manifest_path, variant=3, train_fraction=1.0)
    with pytest.raises(PipelineError):
        make_splits(dataset.manifest_path, variant=4)


def test_split_json_roundtrip(dataset):
    sm = make_splits(dataset.manifest_path, variant=1, train_recipe_count=5, seed=9)
    assert split_from_json(sm.to_json()) == sm
    d = json.loads(sm.to_json())
    assert list(d) == ["variant", "train", "test", "seed"]


# -- summaries ----------------------------------------------------------------


def test_design_table(dataset):
    table = design_table(dataset.manifest_path)
    assert len(table) == 2
    for row in table:
        assert row["edges"] == 2 * row["nodes"] + row["pos"]
        assert row["depth"] >= 1


def test_design_table_one_and(tmp_path):
    g = Aig()
    g.add_po("y", g.add_and(g.add_pi("a"), g.add_pi("b")))
    designs_dir = tmp_path / "designs"
    designs_dir.mkdir()
    (designs_dir / "tiny.bench").write_text(write_bench(g), encoding="utf-8")
    result = generate_dataset(
        designs_dir, recipe_count=1, recipe_length=1, seed=0,
        out_dir=tmp_path / "out",
    )
    (row,) = design_table(result.manifest_path)
    assert row == {
        "ip": "tiny", "pis": 2, "pos": 1, "nodes": 1,
        "edges": 3, "inverters": 0, "depth": 1,
    }


def test_final_qor_table(dataset):
    table = final_qor_table(dataset.manifest_path)
    assert len(table) == 2 * 10
    rows = load_manifest(dataset.manifest_path)
    by_key = {(r["ip"], r["recipe_id"], r["step_id"]): r for r in rows}
    for row in table:
        last = by_key[(row["ip"], row["recipe_id"], 20)]
        assert row["final_nodes"] == last["nodes"]
        assert row["final_depth"] == last["depth"]


def test_topk_integration(dataset):
    results = topk_inputs(dataset.manifest_path)
    assert sorted(results) == sorted({r["ip"] for r in dataset.rows})
    assert all(len(v) == 10 for v in results.values())
    names, matrix = top_k_overlap(results, 0.3)
    assert len(names) == 2
    assert matrix[0][0] == matrix[1][1] == 1.0
