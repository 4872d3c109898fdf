"""NPN equivalence over 4-input functions and a minimal-tree template store.

Two 4-input functions are NPN-equivalent when one maps to the other by
permuting inputs, complementing inputs and possibly complementing the
output: 24 * 16 * 2 = 768 transforms.  A single ascending sweep over all
65,536 truth tables computes, for every function, its class representative
(the smallest member of the orbit) plus one transform that maps the
representative onto the function.  There are 222 classes.

For rewriting, the library stores one AIG template per representative:
the smallest AND-tree (complements are free edge attributes) found by a
level-by-level enumeration up to ``max_template_nodes`` nodes.  Minimal
tree size is constant across an NPN class, so representatives are the only
functions that need templates; instantiation re-applies the stored
transform.  Templates serialize to prefix expressions over ``x0..x3``,
``&`` (AND), ``!`` (complement) and ``0`` (constant false), e.g.
``"& x0 ! & x1 x2"``.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field

import numpy as np

from .tt import var_projection

NUM_VARS = 4
FULL = 0xFFFF

PERMS: tuple[tuple[int, ...], ...] = tuple(itertools.permutations(range(NUM_VARS)))

CACHE_ENV = "AIGPIPE_NPN_CACHE"

_SIGMA: np.ndarray | None = None


def _sigma_table() -> np.ndarray:
    """Pattern-index remap for every (perm, input-mask) pair: (384, 16).

    Row ``perm_idx * 16 + mask`` holds sigma with
    ``apply(f)(p) = f(sigma(p))`` where input ``j`` of ``f`` reads
    ``x[perm[j]] ^ mask_bit_j``.
    """
    global _SIGMA
    if _SIGMA is None:
        sig = np.zeros((len(PERMS) * 16, 16), dtype=np.uint8)
        for pi, perm in enumerate(PERMS):
            for mask in range(16):
                for p in range(16):
                    s = 0
                    for j in range(NUM_VARS):
                        bit = ((p >> perm[j]) & 1) ^ ((mask >> j) & 1)
                        s |= bit << j
                    sig[pi * 16 + mask, p] = s
        _SIGMA = sig
    return _SIGMA


def apply_transform(f: int, perm_idx: int, mask: int, out: int) -> int:
    """Transform a 16-bit truth table; inverse direction of canonization."""
    sig = _sigma_table()[perm_idx * 16 + mask]
    g = 0
    for p in range(16):
        g |= ((f >> int(sig[p])) & 1) << p
    return g ^ (FULL if out else 0)


@dataclass(frozen=True)
class CanonTables:
    """Per-function canonization data over the full 16-bit table space."""

    canon: np.ndarray      # uint16[65536]: class representative
    perm_idx: np.ndarray   # uint8: transform taking the representative to f
    mask: np.ndarray       # uint8
    out: np.ndarray        # uint8
    reps: tuple[int, ...]  # ascending class representatives

    @property
    def class_count(self) -> int:
        return len(self.reps)


_TABLES: CanonTables | None = None


def build_canon_tables() -> CanonTables:
    sig = _sigma_table().astype(np.uint32)
    shifts = np.arange(16, dtype=np.uint32)
    canon = np.zeros(1 << 16, dtype=np.uint16)
    perm_idx = np.zeros(1 << 16, dtype=np.uint8)
    mask_arr = np.zeros(1 << 16, dtype=np.uint8)
    out_arr = np.zeros(1 << 16, dtype=np.uint8)
    seen = np.zeros(1 << 16, dtype=bool)
    reps: list[int] = []
    for t in range(1 << 16):
        if seen[t]:
            continue
        reps.append(t)
        bits = (np.uint32(t) >> sig) & 1
        plain = (bits << shifts).sum(axis=1).astype(np.int64)
        orbit = np.concatenate([plain, plain ^ FULL])
        uniq, first = np.unique(orbit, return_index=True)
        new = ~seen[uniq]
        members = uniq[new]
        k = first[new]
        seen[members] = True
        canon[members] = t
        out_arr[members] = (k >= len(plain)).astype(np.uint8)
        k = k % len(plain)
        perm_idx[members] = (k // 16).astype(np.uint8)
        mask_arr[members] = (k % 16).astype(np.uint8)
    return CanonTables(canon, perm_idx, mask_arr, out_arr, tuple(reps))


def canon_tables() -> CanonTables:
    """Process-wide lazily-built canonization tables."""
    global _TABLES
    if _TABLES is None:
        _TABLES = build_canon_tables()
    return _TABLES


# -- template enumeration ---------------------------------------------------

def eval_expr(expr: str, inputs, and_fn, not_fn, const0):
    """Evaluate a prefix expression; generic over the value domain."""
    stack: list = []
    for tok in reversed(expr.split()):
        if tok == "&":
            if len(stack) < 2:
                raise ValueError(f"malformed template {expr!r}")
            a = stack.pop()
            b = stack.pop()
            stack.append(and_fn(a, b))
        elif tok == "!":
            if not stack:
                raise ValueError(f"malformed template {expr!r}")
            stack.append(not_fn(stack.pop()))
        elif tok == "0":
            stack.append(const0)
        elif tok.startswith("x") and tok[1:].isdigit() and int(tok[1:]) < NUM_VARS:
            stack.append(inputs[int(tok[1:])])
        else:
            raise ValueError(f"unknown token {tok!r} in template {expr!r}")
    if len(stack) != 1:
        raise ValueError(f"malformed template {expr!r}")
    return stack[0]


def expr_table(expr: str) -> int:
    projections = [var_projection(i, NUM_VARS) for i in range(NUM_VARS)]
    return eval_expr(expr, projections,
                     lambda a, b: a & b, lambda a: a ^ FULL, 0)


def expr_node_count(expr: str) -> int:
    return expr.count("&")


def _enumerate_min_trees(max_nodes: int) -> dict[int, str]:
    """Smallest AND-tree per realizable function, as prefix expressions.

    Complementation is free, so every found function immediately admits
    its complement at the same cost.  Functions whose smallest tree needs
    more than ``max_nodes`` AND nodes are absent from the result.
    """
    cost = np.full(1 << 16, 255, dtype=np.uint8)
    parent: dict[int, tuple] = {0: ("c0",), FULL: ("not", 0)}
    cost[0] = 0
    cost[FULL] = 0
    for i in range(NUM_VARS):
        p = var_projection(i, NUM_VARS)
        parent[p] = ("x", i)
        parent[p ^ FULL] = ("not", p)
        cost[p] = 0
        cost[p ^ FULL] = 0

    levels: dict[int, np.ndarray] = {0: np.where(cost == 0)[0].astype(np.uint16)}
    for c in range(1, max_nodes + 1):
        for i in range((c - 1) // 2 + 1):
            j = c - 1 - i
            a_lvl, b_lvl = levels.get(i), levels.get(j)
            if a_lvl is None or b_lvl is None or not len(a_lvl) or not len(b_lvl):
                continue
            chunk = max(1, 4_000_000 // len(b_lvl))
            for s in range(0, len(a_lvl), chunk):
                a = a_lvl[s:s + chunk]
                prods = (a[:, None] & b_lvl[None, :]).ravel()
                uniq, first = np.unique(prods, return_index=True)
                fresh = cost[uniq] == 255
                if not fresh.any():
                    continue
                rows = first[fresh] // len(b_lvl)
                cols = first[fresh] % len(b_lvl)
                for f, g, h in zip(uniq[fresh].tolist(),
                                   a[rows].tolist(), b_lvl[cols].tolist()):
                    if cost[f] != 255:  # realized via a complement just now
                        continue
                    cost[f] = c
                    parent[f] = ("and", g, h)
                    nf = f ^ FULL
                    if cost[nf] == 255:
                        cost[nf] = c
                        parent[nf] = ("not", f)
        levels[c] = np.where(cost == c)[0].astype(np.uint16)

    def render(f: int) -> str:
        kind = parent[f]
        if kind[0] == "c0":
            return "0"
        if kind[0] == "x":
            return f"x{kind[1]}"
        if kind[0] == "not":
            return "! " + render(kind[1])
        return f"& {render(kind[1])} {render(kind[2])}"

    return {int(f): render(int(f)) for f in np.where(cost != 255)[0]}


@dataclass(frozen=True)
class NpnLibrary:
    """Rewrite library: canonization tables plus per-class templates."""

    tables: CanonTables
    templates: dict[int, str]  # representative table -> prefix expression
    max_template_nodes: int

    def lookup(self, table: int) -> tuple[str, int, int, int, int] | None:
        """Template and transform for an arbitrary 16-bit function.

        Returns ``(expr, perm_idx, mask, out, tree_nodes)`` or None when the
        class has no template within the node bound.  Instantiating ``expr``
        with input ``j`` bound to leaf ``perm[j]`` xor mask bit ``j``, then
        complementing the output when ``out`` is set, reproduces ``table``.
        """
        rep = int(self.tables.canon[table])
        expr = self.templates.get(rep)
        if expr is None:
            return None
        return (expr, int(self.tables.perm_idx[table]),
                int(self.tables.mask[table]), int(self.tables.out[table]),
                expr_node_count(expr))


def save_library(lib: NpnLibrary, path: str) -> None:
    lines = [f"{rep:04x}\t{expr}" for rep, expr in sorted(lib.templates.items())]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def load_templates(path: str) -> dict[int, str]:
    templates: dict[int, str] = {}
    with open(path, encoding="utf-8") as fh:
        for ln, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            try:
                hex_tt, expr = line.split("\t")
                rep = int(hex_tt, 16)
            except ValueError as exc:
                raise ValueError(f"{path}:{ln}: bad cache line") from exc
            if expr_table(expr) != rep:
                raise ValueError(f"{path}:{ln}: template does not "
                                 f"evaluate to {hex_tt}")
            templates[rep] = expr
    return templates


_LIBRARY: NpnLibrary | None = None


def build_npn_library(max_template_nodes: int = 7,
                      cache_path: str | None = None) -> NpnLibrary:
    """Build (or load) the rewrite library.

    ``cache_path`` falls back to the ``AIGPIPE_NPN_CACHE`` environment
    variable; when the file exists its templates are used after
    verification, otherwise the enumeration runs and, if a path was given,
    writes it.
    """
    if max_template_nodes < 1:
        raise ValueError("max_template_nodes must be at least 1")
    tables = canon_tables()
    if cache_path is None:
        cache_path = os.environ.get(CACHE_ENV) or None
    if cache_path and os.path.exists(cache_path):
        templates = load_templates(cache_path)
        return NpnLibrary(tables, templates, max_template_nodes)
    by_function = _enumerate_min_trees(max_template_nodes)
    templates = {rep: by_function[rep] for rep in tables.reps
                 if rep in by_function}
    lib = NpnLibrary(tables, templates, max_template_nodes)
    if cache_path:
        save_library(lib, cache_path)
    return lib


def default_library() -> NpnLibrary:
    """Process-wide library with default settings (built once, then shared)."""
    global _LIBRARY
    if _LIBRARY is None:
        _LIBRARY = build_npn_library()
    return _LIBRARY
