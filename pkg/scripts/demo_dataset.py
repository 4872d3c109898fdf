#!/usr/bin/env python3
"""End-to-end demo: corpus -> dataset -> splits -> QoR summaries."""

import argparse
from pathlib import Path

from aigpipe.corpus import make_corpus, write_corpus
from aigpipe.pipeline import (
    design_table,
    final_qor_table,
    generate_dataset,
    make_splits,
    topk_inputs,
)
from aigpipe.recipe import top_k_overlap


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", required=True, help="workspace directory")
    ap.add_argument("--designs", type=int, default=4)
    ap.add_argument("--recipes", type=int, default=10)
    ap.add_argument("--len", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()

    root = Path(args.out)
    designs_dir = root / "designs"
    write_corpus(designs_dir, make_corpus(args.designs, seed=args.seed))
    result = generate_dataset(
        designs_dir,
        recipe_count=args.recipes,
        recipe_length=args.len,
        seed=args.seed,
        out_dir=root / "dataset",
        verify=True,
        jobs=args.jobs,
    )
    print(f"dataset: {len(result.rows)} samples under {result.out_dir}")

    print("\nunoptimized designs:")
    for row in design_table(result.manifest_path):
        print(
            f"  {row['ip']}: PI={row['pis']} PO={row['pos']} N={row['nodes']} "
            f"E={row['edges']} I={row['inverters']} D={row['depth']}"
        )

    split = make_splits(result.manifest_path, variant=1,
                        train_recipe_count=max(1, args.recipes - 3))
    (root / "split_v1.json").write_text(split.to_json(), encoding="utf-8")
    print(f"\nvariant-1 split: {len(split.train)} train / {len(split.test)} test")

    qor = final_qor_table(result.manifest_path)
    best = {}
    for row in qor:
        cur = best.get(row["ip"])
        if cur is None or row["final_nodes"] < cur["final_nodes"]:
            best[row["ip"]] = row
    print("\nbest recipe per design:")
    for ip in sorted(best):
        row = best[ip]
        print(
            f"  {ip}: recipe {row['recipe_id']} -> "
            f"N={row['final_nodes']} D={row['final_depth']}"
        )

    names, matrix = top_k_overlap(topk_inputs(result.manifest_path), 0.3)
    print("\ntop-30% recipe overlap:")
    for name, vals in zip(names, matrix):
        cells = " ".join(f"{v:.2f}" for v in vals)
        print(f"  {name}: {cells}")


if __name__ == "__main__":
    main()
