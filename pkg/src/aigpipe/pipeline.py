"""Dataset generation: replay recipes over designs, persist graphs and labels.

For every design and recipe the pipeline saves one GraphML snapshot plus a
JSON label per optimization step (step 0 is the unoptimized design), then
assembles a manifest.csv index, the sampled recipe list, train/test splits,
and summary statistics.  File names follow `<ip>_syn<recipe>_step<step>`.
"""

from __future__ import annotations

import csv
import json
import random
import re
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional, Sequence

from .aig import Aig
from .bench import BenchError, parse_bench
from .equiv import DEFAULT_EXHAUSTIVE_LIMIT, exhaustive_equiv, random_sim_equiv
from .graphml import write_graphml
from .npn import default_library
from .recipe import (
    Recipe,
    TransformToken,
    encode_recipe,
    sample_recipes,
    save_recipes,
    token_surface,
)
from .transforms import balance, refactor, resubstitute, rewrite


class PipelineError(ValueError):
    """Raised for bad pipeline inputs or failed in-run verification."""


MANIFEST_NAME = "manifest.csv"
RECIPES_NAME = "recipes.txt"
MANIFEST_COLUMNS = ("ip", "recipe_id", "step_id", "nodes", "depth", "graphml", "json")
SAMPLE_NAME_RE = re.compile(r"^[A-Za-z0-9_]+_syn[0-9]+_step[0-9]+\.(graphml|json)$")

# random-simulation budget when a design is too wide to verify exhaustively
VERIFY_WORDS = 256


def apply_token(aig: Aig, token: TransformToken):
    """Run one optimization pass, returning its TransformOutcome."""
    t = TransformToken(token)
    if t == TransformToken.B:
        return balance(aig)
    if t == TransformToken.RW:
        return rewrite(aig)
    if t == TransformToken.RWZ:
        return rewrite(aig, zero_cost=True)
    if t == TransformToken.RF:
        return refactor(aig)
    if t == TransformToken.RFZ:
        return refactor(aig, zero_cost=True)
    if t == TransformToken.RS:
        return resubstitute(aig)
    return resubstitute(aig, zero_cost=True)


def _tokens(recipe) -> tuple:
    if isinstance(recipe, Recipe):
        return recipe.tokens
    return tuple(TransformToken(t) for t in recipe)


def _check_equivalent(base: Aig, snap: Aig, step_id: int, token: TransformToken):
    if base.stats().pi_count <= DEFAULT_EXHAUSTIVE_LIMIT:
        report = exhaustive_equiv(base, snap)
    else:
        report = random_sim_equiv(base, snap, num_words=VERIFY_WORDS, seed=1)
    if not report.equivalent:
        raise PipelineError(
            f"step {step_id} ({token_surface(token)}) broke equivalence: "
            f"output {report.mismatched_output!r} differs at {report.first_mismatch}"
        )


def run_recipe(aig: Aig, recipe, verify: bool = False) -> list:
    """Replay a recipe, returning [(step_id, snapshot, stats)] for steps 0..L.

    Snapshot 0 is the input as given; snapshot i applies token i to
    snapshot i-1.  With verify=True each snapshot is equivalence-checked
    against snapshot 0 (exhaustively up to 16 inputs, by random simulation
    beyond that); failures raise PipelineError naming the step.
    """
    steps = [(0, aig, aig.stats())]
    current = aig
    for i, token in enumerate(_tokens(recipe), start=1):
        try:
            outcome = apply_token(current, token)
        except PipelineError:
            raise
        except Exception as exc:
            raise PipelineError(
                f"step {i} ({token_surface(token)}) failed: {exc}"
            ) from exc
        current = outcome.result
        if verify:
            _check_equivalent(aig, current, i, token)
        steps.append((i, current, current.stats()))
    return steps


@dataclass(frozen=True)
class SampleLabel:
    """Per-snapshot label persisted as the GraphML's sibling JSON."""

    ip_name: str
    recipe_id: int
    step_id: int
    recipe_tokens: tuple
    pis: int
    pos: int
    nodes: int
    inverters: int
    edges: int
    depth: int
    final_nodes: int
    area_proxy: int
    delay_proxy: int

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2) + "\n"


def label_from_json(text: str) -> SampleLabel:
    d = json.loads(text)
    d["recipe_tokens"] = tuple(d["recipe_tokens"])
    return SampleLabel(**d)


def _sanitize_ip(stem: str) -> str:
    name = re.sub(r"[^A-Za-z0-9_]", "_", stem)
    return name or "design"


def _dataset_task(args):
    """Run one (design, recipe) pair and write its step files."""
    out_dir, ip_name, aig, recipe, verify = args
    out = Path(out_dir)
    steps = run_recipe(aig, recipe, verify=verify)
    codes = tuple(encode_recipe(recipe))
    final = steps[-1][2]
    rows = []
    for step_id, snap, stats in steps:
        base = f"{ip_name}_syn{recipe.recipe_id}_step{step_id}"
        label = SampleLabel(
            ip_name=ip_name,
            recipe_id=recipe.recipe_id,
            step_id=step_id,
            recipe_tokens=codes,
            pis=stats.pi_count,
            pos=stats.po_count,
            nodes=stats.and_count,
            inverters=stats.inverted_edge_count,
            edges=stats.edge_count,
            depth=stats.depth,
            final_nodes=final.and_count,
            area_proxy=final.and_count,
            delay_proxy=final.depth,
        )
        (out / f"{base}.graphml").write_text(
            write_graphml(snap, graph_id=base), encoding="utf-8"
        )
        (out / f"{base}.json").write_text(label.to_json(), encoding="utf-8")
        rows.append(
            {
                "ip": ip_name,
                "recipe_id": recipe.recipe_id,
                "step_id": step_id,
                "nodes": stats.and_count,
                "depth": stats.depth,
                "graphml": f"{base}.graphml",
                "json": f"{base}.json",
            }
        )
    return rows


@dataclass(frozen=True)
class GenerateResult:
    out_dir: Path
    manifest_path: Path
    rows: tuple
    failures: tuple


def generate_dataset(
    designs_dir,
    recipe_count: int,
    recipe_length: int,
    seed: int,
    out_dir,
    verify: bool = False,
    jobs: int = 1,
) -> GenerateResult:
    """Replay `recipe_count` sampled recipes over every BENCH design.

    Unparseable designs are recorded in `failures` and skipped; the rest of
    the batch proceeds.  Output is deterministic for fixed inputs and seed
    regardless of `jobs`: tasks are independent per (design, recipe) and the
    manifest is sorted after collection.
    """
    designs_path, out = Path(designs_dir), Path(out_dir)
    bench_paths = sorted(designs_path.glob("*.bench"))
    if not bench_paths:
        raise PipelineError(f"no .bench designs under {designs_path}")
    designs = []
    failures = []
    seen = set()
    for p in bench_paths:
        try:
            aig = parse_bench(p.read_text(encoding="utf-8"))
        except (BenchError, OSError, UnicodeDecodeError) as exc:
            failures.append((p.name, str(exc)))
            continue
        ip = _sanitize_ip(p.stem)
        if ip in seen:
            raise PipelineError(f"duplicate design name {ip!r}")
        seen.add(ip)
        designs.append((ip, aig))
    if not designs:
        raise PipelineError("no parseable designs")

    out.mkdir(parents=True, exist_ok=True)
    recipes = sample_recipes(recipe_count, recipe_length, seed)
    save_recipes(out / RECIPES_NAME, recipes)
    if any(
        t in (TransformToken.RW, TransformToken.RWZ)
        for r in recipes
        for t in r.tokens
    ):
        default_library()  # built once here; forked workers inherit it

    tasks = [(str(out), ip, aig, r, verify) for ip, aig in designs for r in recipes]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_dataset_task, tasks))
    else:
        chunks = [_dataset_task(t) for t in tasks]
    rows = [row for chunk in chunks for row in chunk]
    rows.sort(key=lambda r: (r["ip"], r["recipe_id"], r["step_id"]))
    manifest_path = out / MANIFEST_NAME
    _write_manifest(manifest_path, rows)
    return GenerateResult(out, manifest_path, tuple(rows), tuple(failures))


def _write_manifest(path, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=MANIFEST_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)


def load_manifest(path) -> list:
    rows = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            for key in ("recipe_id", "step_id", "nodes", "depth"):
                row[key] = int(row[key])
            rows.append(row)
    if not rows:
        raise PipelineError(f"empty manifest: {path}")
    return rows


def _rows_of(manifest) -> list:
    if isinstance(manifest, (str, Path)):
        return load_manifest(manifest)
    rows = list(manifest)
    if not rows:
        raise PipelineError("empty manifest")
    return rows


@dataclass(frozen=True)
class SplitManifest:
    """Disjoint train/test partition of (ip, recipe_id) pairs."""

    variant: int
    train: tuple
    test: tuple
    seed: int

    def to_json(self) -> str:
        d = {
            "variant": self.variant,
            "train": [list(p) for p in self.train],
            "test": [list(p) for p in self.test],
            "seed": self.seed,
        }
        return json.dumps(d, indent=2) + "\n"


def split_from_json(text: str) -> SplitManifest:
    d = json.loads(text)
    return SplitManifest(
        variant=d["variant"],
        train=tuple((ip, rid) for ip, rid in d["train"]),
        test=tuple((ip, rid) for ip, rid in d["test"]),
        seed=d["seed"],
    )


def _step0_nodes(rows) -> dict:
    nodes = {}
    for r in rows:
        if r["step_id"] == 0 and r["ip"] not in nodes:
            nodes[r["ip"]] = r["nodes"]
    return nodes


def make_splits(
    manifest,
    variant: int,
    seed: int = 0,
    train_recipe_count: Optional[int] = None,
    train_fraction: Optional[float] = None,
    small_ips: Optional[Sequence[str]] = None,
) -> SplitManifest:
    """Partition the manifest's (ip, recipe_id) universe into train/test.

    Variant 1 trains on the first `train_recipe_count` recipe ids across
    all designs.  Variant 2 trains on small designs and tests on large
    ones, where "small" is an explicit list or, by default, step-0 node
    count below the corpus median.  Variant 3 splits each design's recipes
    at random, training on `train_fraction` (default 0.7) of them.
    """
    rows = _rows_of(manifest)
    universe = sorted({(r["ip"], r["recipe_id"]) for r in rows})
    ips = sorted({ip for ip, _ in universe})
    recipe_ids = sorted({rid for _, rid in universe})

    if variant == 1:
        if train_recipe_count is None:
            raise PipelineError("variant 1 requires train_recipe_count")
        if not 1 <= train_recipe_count < len(recipe_ids):
            raise PipelineError(
                f"train_recipe_count {train_recipe_count} must be in "
                f"[1, {len(recipe_ids) - 1}]"
            )
        train_ids = set(recipe_ids[:train_recipe_count])
        train = [p for p in universe if p[1] in train_ids]
        test = [p for p in universe if p[1] not in train_ids]
    elif variant == 2:
        if small_ips is not None:
            small = set(small_ips)
            unknown = small - set(ips)
            if unknown:
                raise PipelineError(f"unknown designs in small set: {sorted(unknown)}")
        else:
            nodes0 = _step0_nodes(rows)
            if len(nodes0) != len(ips):
                raise PipelineError("variant 2 default partition needs step-0 rows")
            median = statistics.median(nodes0.values())
            small = {ip for ip in ips if nodes0[ip] < median}
        if not small or small == set(ips):
            raise PipelineError("variant 2 needs both small and large designs")
        train = [p for p in universe if p[0] in small]
        test = [p for p in universe if p[0] not in small]
    elif variant == 3:
        fraction = 0.7 if train_fraction is None else train_fraction
        if not 0.0 < fraction < 1.0:
            raise PipelineError(f"train_fraction must be in (0, 1), got {fraction}")
        rng = random.Random(seed)
        train, test = [], []
        for ip in ips:
            rids = sorted(rid for name, rid in universe if name == ip)
            count = int(len(rids) * fraction)
            if not 1 <= count < len(rids):
                raise PipelineError(
                    f"train_fraction {fraction} leaves no test recipes for {ip!r}"
                )
            chosen = set(rng.sample(rids, count))
            train.extend((ip, rid) for rid in rids if rid in chosen)
            test.extend((ip, rid) for rid in rids if rid not in chosen)
    else:
        raise PipelineError(f"unknown split variant {variant}")

    return SplitManifest(
        variant=variant,
        train=tuple(sorted(train)),
        test=tuple(sorted(test)),
        seed=seed,
    )


def design_table(manifest) -> list:
    """Per-design unoptimized characteristics from step-0 labels."""
    rows = _rows_of(manifest)
    base = Path(manifest).parent if isinstance(manifest, (str, Path)) else None
    table = []
    for ip in sorted({r["ip"] for r in rows}):
        candidates = [r for r in rows if r["ip"] == ip and r["step_id"] == 0]
        if not candidates:
            raise PipelineError(f"no step-0 row for design {ip!r}")
        r0 = min(candidates, key=lambda r: r["recipe_id"])
        if base is None:
            raise PipelineError("design_table needs a manifest path to read labels")
        label = label_from_json((base / r0["json"]).read_text(encoding="utf-8"))
        table.append(
            {
                "ip": ip,
                "pis": label.pis,
                "pos": label.pos,
                "nodes": label.nodes,
                "edges": label.edges,
                "inverters": label.inverters,
                "depth": label.depth,
            }
        )
    return table


def final_qor_table(manifest) -> list:
    """(final_nodes, final_depth) per (design, recipe), for QoR heatmaps."""
    rows = _rows_of(manifest)
    last = {}
    for r in rows:
        key = (r["ip"], r["recipe_id"])
        if key not in last or r["step_id"] > last[key]["step_id"]:
            last[key] = r
    return [
        {
            "ip": ip,
            "recipe_id": rid,
            "final_nodes": last[(ip, rid)]["nodes"],
            "final_depth": last[(ip, rid)]["depth"],
        }
        for ip, rid in sorted(last)
    ]


def topk_inputs(manifest) -> dict:
    """Manifest reshaped for top_k_overlap: ip -> [(recipe_id, final_nodes)]."""
    results = {}
    for row in final_qor_table(manifest):
        results.setdefault(row["ip"], []).append(
            (row["recipe_id"], row["final_nodes"])
        )
    return results
