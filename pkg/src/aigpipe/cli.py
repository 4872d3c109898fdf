"""Command-line interface: dataset generation, replay, stats, and equivalence."""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from .aig import AigError
from .bench import parse_bench, write_bench
from .equiv import DEFAULT_EXHAUSTIVE_LIMIT, exhaustive_equiv, random_sim_equiv
from .pipeline import (
    design_table,
    final_qor_table,
    generate_dataset,
    make_splits,
    run_recipe,
    topk_inputs,
)
from .recipe import parse_recipe, token_surface, top_k_overlap


def _print_table(rows, columns) -> None:
    widths = [
        max(len(str(c)), *(len(str(r[c])) for r in rows)) if rows else len(str(c))
        for c in columns
    ]
    print("  ".join(str(c).ljust(w) for c, w in zip(columns, widths)).rstrip())
    for r in rows:
        print("  ".join(str(r[c]).rjust(w) for c, w in zip(columns, widths)))


def _cmd_gen(args) -> int:
    result = generate_dataset(
        args.designs,
        recipe_count=args.recipes,
        recipe_length=args.len,
        seed=args.seed,
        out_dir=args.out,
        verify=args.verify,
        jobs=args.jobs,
    )
    for name, message in result.failures:
        print(f"failed {name}: {message}", file=sys.stderr)
    ips = {r["ip"] for r in result.rows}
    print(f"designs   {len(ips)}")
    print(f"samples   {len(result.rows)}")
    print(f"manifest  {result.manifest_path}")
    return 1 if result.failures else 0


def _cmd_run(args) -> int:
    aig = parse_bench(Path(args.file).read_text(encoding="utf-8"))
    recipe = parse_recipe(args.recipe)
    steps = run_recipe(aig, recipe, verify=args.verify)
    surfaces = ["-"] + [token_surface(t) for t in recipe.tokens]
    rows = [
        {
            "step": sid,
            "token": surfaces[sid],
            "nodes": stats.and_count,
            "depth": stats.depth,
            "edges": stats.edge_count,
        }
        for sid, _, stats in steps
    ]
    _print_table(rows, ("step", "token", "nodes", "depth", "edges"))
    if args.dump_steps:
        out = Path(args.dump_steps)
        out.mkdir(parents=True, exist_ok=True)
        stem = Path(args.file).stem
        for sid, snap, _ in steps:
            path = out / f"{stem}_step{sid}.bench"
            path.write_text(write_bench(snap), encoding="utf-8")
    return 0


def _stats_row(name, stats) -> dict:
    return {
        "ip": name,
        "pis": stats.pi_count,
        "pos": stats.po_count,
        "nodes": stats.and_count,
        "edges": stats.edge_count,
        "inverters": stats.inverted_edge_count,
        "depth": stats.depth,
    }


def _cmd_stats(args) -> int:
    path = Path(args.path)
    if path.suffix == ".csv":
        rows = design_table(path)
    else:
        aig = parse_bench(path.read_text(encoding="utf-8"))
        rows = [_stats_row(path.stem, aig.stats())]
    _print_table(rows, ("ip", "pis", "pos", "nodes", "edges", "inverters", "depth"))
    return 0


def _cmd_splits(args) -> int:
    small_ips = args.small_ips.split(",") if args.small_ips else None
    sm = make_splits(
        args.manifest,
        variant=args.variant,
        seed=args.seed,
        train_recipe_count=args.train_recipes,
        train_fraction=args.train_fraction,
        small_ips=small_ips,
    )
    text = sm.to_json()
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"train {len(sm.train)}  test {len(sm.test)}  -> {args.out}")
    else:
        print(text, end="")
    return 0


def _cmd_equiv(args) -> int:
    a = parse_bench(Path(args.a).read_text(encoding="utf-8"))
    b = parse_bench(Path(args.b).read_text(encoding="utf-8"))
    if max(a.stats().pi_count, b.stats().pi_count) <= args.exhaustive_limit:
        report = exhaustive_equiv(a, b, limit=args.exhaustive_limit)
    else:
        report = random_sim_equiv(a, b, num_words=args.words, seed=args.seed)
    if report.equivalent:
        print(f"equivalent ({report.method}, {report.patterns_checked} patterns)")
        return 0
    print(
        f"NOT equivalent ({report.method}): output {report.mismatched_output!r} "
        f"differs under {report.first_mismatch}"
    )
    return 1


def _cmd_heatmap(args) -> int:
    rows = final_qor_table(args.manifest)
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(
            fh, fieldnames=("ip", "recipe_id", "final_nodes", "final_depth")
        )
        writer.writeheader()
        writer.writerows(rows)
    print(f"{len(rows)} rows -> {args.out}")
    return 0


def _cmd_topk(args) -> int:
    names, matrix = top_k_overlap(topk_inputs(args.manifest), args.k_fraction)
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["ip"] + names)
        for name, row in zip(names, matrix):
            writer.writerow([name] + [f"{v:.6f}" for v in row])
    print(f"{len(names)}x{len(names)} matrix -> {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aigpipe",
        description="Replay synthesis recipes over BENCH designs and emit "
        "labeled graph datasets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a dataset from a design directory")
    gen.add_argument("--designs", required=True, help="directory of .bench files")
    gen.add_argument("--recipes", type=int, default=1500, metavar="K")
    gen.add_argument("--len", type=int, default=20, metavar="L")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True, help="output dataset directory")
    gen.add_argument("--verify", action="store_true",
                     help="equivalence-check every emitted snapshot")
    gen.add_argument("--jobs", type=int, default=1)
    gen.set_defaults(func=_cmd_gen)

    run = sub.add_parser("run", help="replay one recipe over one design")
    run.add_argument("file", help="BENCH netlist")
    run.add_argument("--recipe", required=True, help='e.g. "b;rw;rf;b;rw -z"')
    run.add_argument("--verify", action="store_true")
    run.add_argument("--dump-steps", metavar="DIR",
                     help="write per-step BENCH snapshots")
    run.set_defaults(func=_cmd_run)

    stats = sub.add_parser("stats", help="design characteristics table")
    stats.add_argument("path", help="a .bench file or a manifest.csv")
    stats.set_defaults(func=_cmd_stats)

    splits = sub.add_parser("splits", help="emit a train/test split manifest")
    splits.add_argument("--manifest", required=True)
    splits.add_argument("--variant", type=int, required=True, choices=(1, 2, 3))
    group = splits.add_mutually_exclusive_group()
    group.add_argument("--train-recipes", type=int, metavar="N")
    group.add_argument("--train-fraction", type=float, metavar="F")
    group.add_argument("--small-ips", metavar="LIST",
                       help="comma-separated design names")
    splits.add_argument("--seed", type=int, default=0)
    splits.add_argument("--out", help="write JSON here instead of stdout")
    splits.set_defaults(func=_cmd_splits)

    equiv = sub.add_parser("equiv", help="check two netlists for equivalence")
    equiv.add_argument("a")
    equiv.add_argument("b")
    equiv.add_argument("--exhaustive-limit", type=int,
                       default=DEFAULT_EXHAUSTIVE_LIMIT)
    equiv.add_argument("--words", type=int, default=64)
    equiv.add_argument("--seed", type=int, default=1)
    equiv.set_defaults(func=_cmd_equiv)

    heatmap = sub.add_parser("heatmap", help="per-recipe final QoR table")
    heatmap.add_argument("--manifest", required=True)
    heatmap.add_argument("--out", required=True, metavar="CSV")
    heatmap.set_defaults(func=_cmd_heatmap)

    topk = sub.add_parser("topk", help="top-k recipe overlap across designs")
    topk.add_argument("--manifest", required=True)
    topk.add_argument("--k-fraction", type=float, required=True, metavar="F")
    topk.add_argument("--out", required=True, metavar="CSV")
    topk.set_defaults(func=_cmd_topk)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (AigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
