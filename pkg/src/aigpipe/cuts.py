"""K-feasible cut enumeration and cone truth tables.

A cut of node ``n`` is a set of nodes (leaves) such that every path from a
PI or the constant to ``n`` passes through a leaf.  Enumeration is the
usual bottom-up merge with a priority bound: each node keeps at most
``max_cuts`` cuts ordered by (size, leaf tuple), always including the
trivial cut ``{n}``.
"""

from __future__ import annotations

from .aig import Aig, lit_is_compl, lit_node
from .tt import table_mask, var_projection

Cut = tuple[int, ...]  # sorted node indices


def enumerate_cuts(aig: Aig, k: int = 4, max_cuts: int = 8) -> list[list[Cut]]:
    """Per-node cut lists for the whole graph, indexed by node."""
    if k < 2:
        raise ValueError("cut size must be at least 2")
    cuts: list[list[Cut]] = [[] for _ in range(len(aig))]
    for n in range(len(aig)):
        if not aig.is_and(n):
            cuts[n] = [(n,)]
            continue
        a, b = aig.fanins(n)
        merged: set[Cut] = set()
        for ca in cuts[lit_node(a)]:
            for cb in cuts[lit_node(b)]:
                union = tuple(sorted(set(ca) | set(cb)))
                if len(union) <= k:
                    merged.add(union)
        # drop cuts dominated by a strict subset
        ordered = sorted(merged, key=lambda c: (len(c), c))
        kept: list[Cut] = []
        for c in ordered:
            cs = set(c)
            if not any(set(p) < cs or set(p) == cs for p in kept):
                kept.append(c)
        kept = kept[:max_cuts - 1]
        kept.append((n,))
        cuts[n] = kept
    return cuts


def cone_table(aig: Aig, root: int, leaves: Cut,
               num_vars: int | None = None) -> int | None:
    """Truth table of ``root`` over ``leaves``, or None if the cone escapes.

    Bit width is ``2**num_vars`` (default ``len(leaves)``); extra variables
    beyond the leaf count are vacuous, which matches zero-padded cut
    semantics.
    """
    if num_vars is None:
        num_vars = len(leaves)
    if len(leaves) > num_vars:
        raise ValueError("more leaves than variables")
    mask = table_mask(num_vars)
    val: dict[int, int] = {0: 0}
    for i, leaf in enumerate(leaves):
        val[leaf] = var_projection(i, num_vars)
    if root in val:
        return val[root]
    stack = [root]
    while stack:
        n = stack[-1]
        if n in val:
            stack.pop()
            continue
        if not aig.is_and(n):
            return None  # a PI that is not a leaf: not a valid cut
        a, b = aig.fanins(n)
        na, nb = lit_node(a), lit_node(b)
        missing = [x for x in (na, nb) if x not in val]
        if missing:
            stack.extend(missing)
            continue
        stack.pop()
        va = val[na] ^ (mask if lit_is_compl(a) else 0)
        vb = val[nb] ^ (mask if lit_is_compl(b) else 0)
        val[n] = va & vb
    return val[root]
