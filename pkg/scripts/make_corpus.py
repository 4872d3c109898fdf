#!/usr/bin/env python3
"""Generate a directory of seeded random BENCH designs."""

import argparse

from aigpipe.corpus import DEFAULT_CORPUS_SEED, make_corpus, write_corpus


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=20)
    ap.add_argument("--seed", type=int, default=DEFAULT_CORPUS_SEED)
    ap.add_argument("--max-pis", type=int, default=12)
    ap.add_argument("--max-gates", type=int, default=200)
    ap.add_argument("--out", required=True, help="output directory")
    args = ap.parse_args()
    designs = make_corpus(
        args.count, seed=args.seed, max_pis=args.max_pis, max_gates=args.max_gates
    )
    paths = write_corpus(args.out, designs)
    for (name, aig), path in zip(designs, paths):
        s = aig.stats()
        print(
            f"{path}  PI={s.pi_count} PO={s.po_count} "
            f"N={s.and_count} D={s.depth}"
        )


if __name__ == "__main__":
    main()
