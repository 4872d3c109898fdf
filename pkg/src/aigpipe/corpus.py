"""Seeded random design generation for tests, demos, and benchmarks.

Designs mix AND, OR, XOR, and MUX structure over a bounded input set so the
optimization passes have sharing and redundancy to work with, while staying
small enough for exhaustive equivalence checking.
"""

from __future__ import annotations

import random
from pathlib import Path

from .aig import Aig
from .bench import write_bench

DEFAULT_CORPUS_SEED = 414243


def random_design(
    seed: int,
    min_pis: int = 4,
    max_pis: int = 12,
    min_gates: int = 30,
    max_gates: int = 200,
) -> Aig:
    """One random multi-output design, cleaned of dead logic."""
    rng = random.Random(seed)
    g = Aig()
    n_pi = rng.randint(min_pis, max_pis)
    lits = [g.add_pi(f"pi{i}") for i in range(n_pi)]
    target = rng.randint(min_gates, max_gates)
    attempts = 0
    while g.num_ands() < target and attempts < target * 8:
        attempts += 1
        a = rng.choice(lits) ^ rng.randint(0, 1)
        b = rng.choice(lits) ^ rng.randint(0, 1)
        roll = rng.random()
        if roll < 0.50:
            lit = g.add_and(a, b)
        elif roll < 0.75:
            lit = g.add_or(a, b)
        elif roll < 0.92:
            lit = g.add_xor(a, b)
        else:
            c = rng.choice(lits) ^ rng.randint(0, 1)
            lit = g.add_or(g.add_and(a, b), g.add_and(a ^ 1, c))
        lits.append(lit)
    n_po = rng.randint(3, max(3, n_pi))
    gates = lits[n_pi:] or lits
    recent = gates[-max(4, len(gates) // 4):]
    for k in range(n_po):
        # bias toward recent gates so deep cones stay live after cleanup
        pool = recent if rng.random() < 0.7 else gates
        g.add_po(f"po{k}", rng.choice(pool) ^ rng.randint(0, 1))
    return g.cleanup()


def make_corpus(count: int, seed: int = DEFAULT_CORPUS_SEED, **kwargs) -> list:
    """`count` named designs, each with at least ten live gates."""
    designs = []
    attempt = 0
    while len(designs) < count:
        aig = random_design(seed + attempt, **kwargs)
        attempt += 1
        if aig.num_ands() >= 10:
            designs.append((f"rand{len(designs):02d}", aig))
    return designs


def write_corpus(out_dir, designs) -> list:
    """Write designs as BENCH files; returns the created paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, aig in designs:
        path = out / f"{name}.bench"
        path.write_text(write_bench(aig), encoding="utf-8")
        paths.append(path)
    return paths
