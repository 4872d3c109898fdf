"""Acceptance gate: one test per top-level contract criterion.

Each test asserts its criterion with explicit tolerances and prints a
single summary line with the measured numbers.
"""

import re
import time

import pytest

from aigpipe.aig import Aig, and_tree
from aigpipe.bench import parse_bench, write_bench
from aigpipe.corpus import make_corpus, random_design, write_corpus
from aigpipe.equiv import exhaustive_equiv
from aigpipe.graphml import write_graphml
from aigpipe.npn import build_canon_tables, build_npn_library, expr_table
from aigpipe.pipeline import (
    SAMPLE_NAME_RE,
    generate_dataset,
    label_from_json,
    load_manifest,
    make_splits,
    run_recipe,
)
from aigpipe.recipe import TransformToken, sample_recipes
from aigpipe.transforms import balance, rewrite

T = TransformToken

EQUIV_RUNS = 100
EQUIV_BUDGET_SECONDS = 600.0
NPN_BUDGET_SECONDS = 60.0
FORMAT_TRIALS = 200


def _hand_circuits():
    """Small hand-built designs with known structure, all at most 12 PIs."""
    designs = []

    chain = Aig()
    lit = chain.add_pi("x0")
    for i in range(1, 8):
        lit = chain.add_and(lit, chain.add_pi(f"x{i}"))
    chain.add_po("y", lit)
    designs.append(("chain8", chain))

    parity = Aig()
    lit = parity.add_pi("x0")
    for i in range(1, 8):
        lit = parity.add_xor(lit, parity.add_pi(f"x{i}"))
    parity.add_po("y", lit)
    designs.append(("parity8", parity))

    adder = Aig()
    carry = 0
    for i in range(4):
        a, b = adder.add_pi(f"a{i}"), adder.add_pi(f"b{i}")
        s = adder.add_xor(adder.add_xor(a, b), carry)
        carry = adder.add_or(
            adder.add_and(a, b), adder.add_and(carry, adder.add_xor(a, b))
        )
        adder.add_po(f"s{i}", s)
    adder.add_po("cout", carry)
    designs.append(("adder4", adder))

    mux = Aig()
    s0, s1 = mux.add_pi("s0"), mux.add_pi("s1")
    data = [mux.add_pi(f"d{i}") for i in range(4)]
    lo = mux.add_or(mux.add_and(s0 ^ 1, data[0]), mux.add_and(s0, data[1]))
    hi = mux.add_or(mux.add_and(s0 ^ 1, data[2]), mux.add_and(s0, data[3]))
    mux.add_po("y", mux.add_or(mux.add_and(s1 ^ 1, lo), mux.add_and(s1, hi)))
    designs.append(("mux4", mux))

    maj = Aig()
    bits = [maj.add_pi(f"m{i}") for i in range(5)]
    terms = []
    for i in range(5):
        for j in range(i + 1, 5):
            for k in range(j + 1, 5):
                terms.append(and_tree(maj, [bits[i], bits[j], bits[k]]))
    out = terms[0]
    for t in terms[1:]:
        out = maj.add_or(out, t)
    maj.add_po("y", out)
    designs.append(("majority5", maj))

    return designs


@pytest.fixture(scope="module")
def corpus(tmp_path_factory):
    """At least 20 BENCH circuits with at most 12 PIs each."""
    designs = _hand_circuits() + make_corpus(16, seed=2024)
    assert len(designs) >= 20
    out = tmp_path_factory.mktemp("corpus")
    write_corpus(out, designs)
    loaded = []
    for name, _ in designs:
        aig = parse_bench((out / f"{name}.bench").read_text(encoding="utf-8"))
        assert aig.stats().pi_count <= 12
        loaded.append((name, aig))
    return loaded


@pytest.fixture(scope="module")
def recipe_runs(corpus):
    """100 verified recipe replays of length 20 over the corpus."""
    recipes = sample_recipes(EQUIV_RUNS, 20, seed=99)
    runs = []
    start = time.time()
    for recipe in recipes:
        name, aig = corpus[recipe.recipe_id % len(corpus)]
        steps = run_recipe(aig, recipe, verify=True)
        runs.append((name, recipe, [(sid, stats) for sid, _, stats in steps]))
    elapsed = time.time() - start
    return runs, elapsed


def test_equivalence_suite(corpus, recipe_runs):
    runs, elapsed = recipe_runs
    assert len(runs) == EQUIV_RUNS
    for _, recipe, steps in runs:
        assert len(steps) == 21  # step 0 plus 20 verified optimization steps
    assert elapsed < EQUIV_BUDGET_SECONDS
    print(
        f"[PASS] equivalence: {EQUIV_RUNS} recipe runs x 20 exhaustively "
        f"verified steps over {len(corpus)} circuits, 0 mismatches, "
        f"{elapsed:.1f}s < {EQUIV_BUDGET_SECONDS:.0f}s"
    )


def test_monotonicity_suite(recipe_runs):
    runs, _ = recipe_runs
    node_steps = depth_steps = 0
    for name, recipe, steps in runs:
        for (_, before), (sid, after), token in zip(
            steps, steps[1:], recipe.tokens
        ):
            if token == T.B:
                assert after.depth <= before.depth, (name, sid, token)
                depth_steps += 1
            else:
                assert after.and_count <= before.and_count, (name, sid, token)
                node_steps += 1
    print(
        f"[PASS] monotonicity: N non-increasing on {node_steps} rw/rf/rs "
        f"steps, D non-increasing on {depth_steps} b steps"
    )


def test_npn_oracle(monkeypatch):
    monkeypatch.delenv("AIGPIPE_NPN_CACHE", raising=False)
    start = time.time()
    tables = build_canon_tables()
    library = build_npn_library()
    elapsed = time.time() - start
    assert tables.class_count == 222
    assert library.templates, "library stores at least the cheap classes"
    for rep, expr in library.templates.items():
        assert expr_table(expr) == rep
    assert elapsed < NPN_BUDGET_SECONDS
    print(
        f"[PASS] npn: 65536 tables -> {tables.class_count} classes, "
        f"{len(library.templates)} templates all verified, "
        f"{elapsed:.1f}s < {NPN_BUDGET_SECONDS:.0f}s"
    )


def test_rewrite_gain_case():
    g = Aig()
    a, b, c = g.add_pi("a"), g.add_pi("b"), g.add_pi("c")
    g.add_po("y", g.add_or(g.add_and(a, b), g.add_and(a, c)))
    assert g.num_ands() == 3
    out = rewrite(g)
    assert out.nodes_after == 2
    assert exhaustive_equiv(g, out.result).equivalent
    print("[PASS] rewrite gain: (a&b)|(a&c) 3 ANDs -> 2 ANDs, equivalent")


def test_balance_depth_case():
    g = Aig()
    lit = g.add_pi("x0")
    for i in range(1, 8):
        lit = g.add_and(lit, g.add_pi(f"x{i}"))
    g.add_po("y", lit)
    assert g.depth() == 7
    out = balance(g)
    assert out.depth_after == 3
    assert exhaustive_equiv(g, out.result).equivalent
    print("[PASS] balance depth: 8-input chain depth 7 -> 3, equivalent")


def test_format_suite():
    checked_const = 0
    for trial in range(FORMAT_TRIALS):
        g = random_design(
            900_000 + trial, min_pis=3, max_pis=12, min_gates=10, max_gates=60
        )
        text = write_bench(g)
        assert text == write_bench(g), "BENCH writer must be deterministic"
        back = parse_bench(text)
        assert exhaustive_equiv(g, back).equivalent, f"trial {trial}"

        xml = write_graphml(g)
        assert xml == write_graphml(g), "GraphML writer must be deterministic"
        stats = g.stats()
        const_nodes = xml.count('<node id="0">')
        checked_const += const_nodes
        expected = stats.pi_count + stats.po_count + stats.and_count + const_nodes
        assert xml.count("<node ") == expected
        assert xml.count("<edge ") == stats.edge_count
        inverted = xml.count('<data key="edge_type">1</data>')
        assert inverted == stats.inverted_edge_count
    print(
        f"[PASS] formats: {FORMAT_TRIALS} BENCH round-trips equivalent, "
        f"GraphML counts match stats (node records = PI+PO+N plus "
        f"{checked_const} constant records), writers byte-deterministic"
    )


def test_pipeline_arithmetic(tmp_path):
    designs_dir = tmp_path / "designs"
    write_corpus(designs_dir, make_corpus(2, seed=321))
    result = generate_dataset(
        designs_dir, recipe_count=10, recipe_length=20, seed=5,
        out_dir=tmp_path / "out",
    )
    graphmls = sorted(result.out_dir.glob("*.graphml"))
    jsons = sorted(result.out_dir.glob("*.json"))
    assert len(graphmls) == 420 and len(jsons) == 420
    for p in graphmls + jsons:
        assert SAMPLE_NAME_RE.match(p.name), p.name

    split = make_splits(result.manifest_path, variant=1, train_recipe_count=7)
    for ip in {r["ip"] for r in result.rows}:
        assert sum(1 for q, _ in split.train if q == ip) == 7
        assert sum(1 for q, _ in split.test if q == ip) == 3

    rows = load_manifest(result.manifest_path)
    for row in rows:
        label = label_from_json(
            (result.out_dir / row["json"]).read_text(encoding="utf-8")
        )
        assert label.edges == 2 * label.nodes + label.pos

    # edge-count formula at a published design point: N=1169, PO=128
    assert 2 * 1169 + 128 == 2466
    print(
        "[PASS] pipeline arithmetic: 2 designs x K=10 x L=20 -> 420 pairs, "
        "variant-1 split 7/3 per design, E=2N+PO on all 420 labels, "
        "2*1169+128=2466"
    )
