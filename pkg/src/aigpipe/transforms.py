"""The four local AIG optimizations with zero-cost variants.

balance restructures AND trees to cut depth; rewrite replaces 4-input
cuts with precomputed minimal templates; refactor resynthesizes wider
cones through an irredundant SOP and algebraic factoring; resubstitute
re-expresses nodes with existing divisors.  All four rebuild the graph
functionally: a frozen source AIG is replayed in topological order into a
fresh destination AIG, and each node either keeps its default rebuild or
takes a locally better candidate.

Gains are measured exactly on the destination side with reference
counting: killing a candidate's displaced cone counts freed nodes, and
building a candidate counts created nodes plus revived ones (a structural
hash hit on a previously freed node resurrects its whole cone).  A
replacement is accepted only when freed - added > 0 (>= 0 for the
zero-cost variants), so the node count never increases; balance uses a
level-based acceptance and never increases depth.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from .aig import (
    CONST0,
    CONST1,
    Aig,
    lit_is_compl,
    lit_node,
    lit_not,
    lit_not_if,
)
from .cuts import cone_table, enumerate_cuts
from .npn import PERMS, NpnLibrary, default_library, eval_expr
from .tt import isop, table_mask, var_projection

DEFAULT_CUT_SIZE = 4
DEFAULT_MAX_CUTS = 8
DEFAULT_CONE_INPUTS = 10
DEFAULT_WINDOW_INPUTS = 8
MAX_ISOP_CUBES = 100
MAX_DIVISORS = 64
MAX_PAIR_DIVISORS = 16


@dataclass(frozen=True)
class TransformOutcome:
    result: Aig
    nodes_before: int
    nodes_after: int
    depth_before: int
    depth_after: int
    applied_count: int


def _fanout_counts(aig: Aig) -> list[int]:
    """Consumer count per node: AND fanin references plus PO drivers."""
    fanout = [0] * len(aig)
    for i in range(len(aig)):
        if aig.is_and(i):
            a, b = aig.fanins(i)
            fanout[lit_node(a)] += 1
            fanout[lit_node(b)] += 1
    for _, d in aig.pos:
        fanout[lit_node(d)] += 1
    return fanout


def _mffc_set(aig: Aig, root: int, fanout: list[int]) -> set[int]:
    """Maximum fanout-free cone: nodes used exclusively under ``root``."""
    local: dict[int, int] = {}
    mffc: set[int] = set()
    stack = [root]
    while stack:
        x = stack.pop()
        if x in mffc:
            continue
        mffc.add(x)
        for l in aig.fanins(x):
            f = lit_node(l)
            if not aig.is_and(f):
                continue
            r = local.get(f, fanout[f]) - 1
            local[f] = r
            if r == 0:
                stack.append(f)
    return mffc


def _grow_cone(aig: Aig, root: int, fanout: list[int],
               max_inputs: int) -> tuple[int, ...] | None:
    """Leaf set covering the MFFC of ``root``, greedily widened.

    Expansion repeatedly replaces the AND leaf whose elimination least
    increases the leaf count (ties: lowest index) while the bound holds.
    Returns None when even the MFFC boundary exceeds ``max_inputs``.
    """
    mffc = _mffc_set(aig, root, fanout)
    leaves: set[int] = set()
    for x in mffc:
        for l in aig.fanins(x):
            f = lit_node(l)
            if f not in mffc:
                leaves.add(f)
    if not leaves or len(leaves) > max_inputs:
        return None
    while True:
        best: tuple[int, int] | None = None  # (resulting size, leaf)
        for x in sorted(leaves):
            if not aig.is_and(x):
                continue
            a, b = aig.fanins(x)
            grown = (leaves - {x}) | {lit_node(a), lit_node(b)}
            size = len(grown)
            if size <= max_inputs and (best is None or size < best[0]):
                best = (size, x)
        if best is None:
            break
        x = best[1]
        a, b = aig.fanins(x)
        leaves.discard(x)
        leaves.add(lit_node(a))
        leaves.add(lit_node(b))
    return tuple(sorted(leaves))


class _Rebuild:
    """Replay a frozen AIG into a new one with exact replacement accounting.

    ``refs`` counts, per destination node, committed fanin references plus
    one reference for every source consumer not yet replayed (so cones
    needed later can never be freed early).  Nodes whose count reaches
    zero are killed: marked dead and their fanin references released.
    Structural hash hits on dead nodes revive the cone and are charged to
    whoever caused them.
    """

    def __init__(self, src: Aig):
        self.src = src
        self.dst = Aig()
        self.m: list[int] = [-1] * len(src)  # src node -> dst literal
        self.m[0] = CONST0
        for node, name in zip(src.pis, src.pi_names):
            self.m[node] = self.dst.add_pi(name)
        self.pending = _fanout_counts(src)
        self.refs: list[int] = [0] * len(self.dst)
        self.alive: list[bool] = [True] * len(self.dst)
        for x in range(len(src)):
            if not src.is_and(x):
                self.refs[lit_node(self.m[x])] += self.pending[x]
        self.added_acc = 0
        self.applied = 0

    # -- mapping -----------------------------------------------------------

    def map_lit(self, src_lit: int) -> int:
        mapped = self.m[lit_node(src_lit)]
        assert mapped >= 0, "fanin replayed before its definition"
        return lit_not_if(mapped, lit_is_compl(src_lit))

    # -- reference tracking -------------------------------------------------

    def _grow_arrays(self) -> None:
        while len(self.refs) < len(self.dst):
            self.refs.append(0)
            self.alive.append(True)

    def _revive(self, node: int) -> int:
        """Resurrect a dead cone; returns the number of nodes brought back."""
        count = 0
        stack = [node]
        while stack:
            x = stack.pop()
            if self.alive[x] or not self.dst.is_and(x):
                continue
            self.alive[x] = True
            count += 1
            for l in self.dst.fanins(x):
                f = lit_node(l)
                self.refs[f] += 1
                if self.dst.is_and(f) and not self.alive[f]:
                    stack.append(f)
        return count

    def take_ref(self, l: int) -> None:
        node = lit_node(l)
        if self.dst.is_and(node) and not self.alive[node]:
            self.added_acc += self._revive(node)
        self.refs[node] += 1

    def release_ref(self, l: int) -> int:
        """Drop one reference; kill cones that hit zero.  Returns freed."""
        node = lit_node(l)
        self.refs[node] -= 1
        assert self.refs[node] >= 0, "reference underflow"
        if self.refs[node] == 0:
            return self._kill(node)
        return 0

    def _kill(self, node: int) -> int:
        """Free a zero-reference node and everything it exclusively holds."""
        if not self.dst.is_and(node) or not self.alive[node]:
            return 0
        freed = 0
        stack = [node]
        while stack:
            x = stack.pop()
            if not self.alive[x]:
                continue
            self.alive[x] = False
            freed += 1
            for l in self.dst.fanins(x):
                f = lit_node(l)
                self.refs[f] -= 1
                if (self.refs[f] == 0 and self.dst.is_and(f)
                        and self.alive[f]):
                    stack.append(f)
        return freed

    def kill_root(self, l: int) -> int:
        node = lit_node(l)
        if self.dst.is_and(node) and self.alive[node] and self.refs[node] == 0:
            return self._kill(node)
        return 0

    def ensure_alive(self, l: int) -> None:
        node = lit_node(l)
        if self.dst.is_and(node) and not self.alive[node]:
            self.added_acc += self._revive(node)

    # -- construction -------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        """Tracked AND: charges created and revived nodes to added_acc."""
        before = len(self.dst)
        result = self.dst.add_and(a, b)
        node = lit_node(result)
        if len(self.dst) > before:
            self._grow_arrays()
            self.alive[node] = True
            self.added_acc += 1
            self.take_ref(a)
            self.take_ref(b)
        elif self.dst.is_and(node) and not self.alive[node]:
            self.added_acc += self._revive(node)
        return result

    def add_not(self, a: int) -> int:
        return lit_not(a)

    # -- the driver loop ----------------------------------------------------

    def run(self, candidate_fn, zero_cost: bool) -> Aig:
        """Replay every AND node, consulting ``candidate_fn`` for options.

        ``candidate_fn(node) -> list of builders``; a builder is a
        zero-argument callable returning a destination literal, built with
        ``self.add``/``lit_not``.  Builders run under accounting and must
        be deterministic (they execute once to measure, once to commit).
        """
        src = self.src
        for n in range(1, len(src)):
            if not src.is_and(n):
                continue
            a, b = src.fanins(n)
            ma, mb = self.map_lit(a), self.map_lit(b)
            # this consumer is now materializing: release its claims
            self.release_ref(ma)
            self.release_ref(mb)
            default = self.add(ma, mb)
            chosen = default

            if self.dst.is_and(lit_node(default)):
                builders = candidate_fn(n)
                best_gain = 0
                best_idx = -1
                for idx, builder in enumerate(builders):
                    freed = self.kill_root(default)
                    self.added_acc = 0
                    t = builder()
                    self.ensure_alive(t)
                    added = self.added_acc
                    gain = freed - added
                    usable = t != default
                    # roll back to the default implementation
                    self.kill_root(t)
                    self.added_acc = 0
                    rebuilt = self.add(ma, mb)
                    assert rebuilt == default, "rollback must restore state"
                    if not usable:
                        continue
                    if gain > best_gain or (zero_cost and gain == 0
                                            and best_idx < 0):
                        if gain > 0 or zero_cost:
                            best_gain = gain
                            best_idx = idx
                if best_idx >= 0:
                    self.kill_root(default)
                    self.added_acc = 0
                    chosen = builders[best_idx]()
                    self.ensure_alive(chosen)
                    self.applied += 1

            self.m[n] = chosen
            node = lit_node(chosen)
            if self.pending[n]:
                if self.dst.is_and(node) and not self.alive[node]:
                    self._revive(node)
                self.refs[node] += self.pending[n]
            else:
                self.kill_root(chosen)

        for name, d in src.pos:
            self.dst.add_po(name, self.map_lit(d))
        return self.dst.cleanup()


def _outcome(before: Aig, after: Aig, applied: int) -> TransformOutcome:
    sb, sa = before.stats(), after.stats()
    return TransformOutcome(
        result=after,
        nodes_before=sb.and_count,
        nodes_after=sa.and_count,
        depth_before=sb.depth,
        depth_after=sa.depth,
        applied_count=applied,
    )


def _run_rebuild(aig: Aig, candidate_fn_of, zero_cost: bool) -> TransformOutcome:
    src = aig.cleanup()
    rb = _Rebuild(src)
    result = rb.run(candidate_fn_of(src, rb), zero_cost)
    return _outcome(aig, result, rb.applied)


# -- balance -----------------------------------------------------------------

def balance(aig: Aig) -> TransformOutcome:
    """Rebuild maximal AND trees with level-minimal shapes.

    A tree extends through non-complemented fanin edges whose source is an
    AND node with a single consumer.  Leaves are deduplicated (a leaf next
    to its complement collapses the tree to constant false) and rejoined
    lowest-level-first, ties by lower node index, which minimizes the root
    level over all shapes; depth never increases and node count never
    grows.
    """
    src = aig.cleanup()
    dst = Aig()
    m: list[int] = [-1] * len(src)
    m[0] = CONST0
    for node, name in zip(src.pis, src.pi_names):
        m[node] = dst.add_pi(name)
    lv = [0] * len(dst)  # destination levels, maintained incrementally
    src_levels = src.levels()
    applied = 0

    # a node is tree-internal when its only consumer is an AND reaching it
    # through a non-complemented edge (PO drivers never extend a tree)
    consumer_count = [0] * len(src)
    sole_edge_plain = [False] * len(src)
    for i in range(len(src)):
        if src.is_and(i):
            for l in src.fanins(i):
                f = lit_node(l)
                consumer_count[f] += 1
                sole_edge_plain[f] = not lit_is_compl(l)
    for _, d in src.pos:
        f = lit_node(d)
        consumer_count[f] += 1
        sole_edge_plain[f] = False

    def is_internal(f: int) -> bool:
        return src.is_and(f) and consumer_count[f] == 1 and sole_edge_plain[f]

    def joined_lit(xa: int, xb: int) -> int:
        result = dst.add_and(xa, xb)
        while len(lv) < len(dst):
            node = len(lv)
            fa, fb = dst.fanins(node)
            lv.append(1 + max(lv[lit_node(fa)], lv[lit_node(fb)]))
        return result

    for n in range(1, len(src)):
        if not src.is_and(n):
            continue
        if is_internal(n):
            continue  # swallowed by the consumer's tree
        # collect the maximal tree rooted here
        leaves: list[int] = []
        stack = list(src.fanins(n))
        while stack:
            l = stack.pop()
            if not lit_is_compl(l) and is_internal(lit_node(l)):
                fa, fb = src.fanins(lit_node(l))
                stack.append(fa)
                stack.append(fb)
            else:
                leaves.append(l)
        mapped = [lit_not_if(m[lit_node(l)], lit_is_compl(l)) for l in leaves]
        unique = sorted(set(mapped))
        # join lowest levels first; complementary or constant leaves sort
        # adjacently and collapse through the one-level AND rules
        heap = [(lv[lit_node(l)], l) for l in unique]
        heapq.heapify(heap)
        while len(heap) > 1:
            _, xa = heapq.heappop(heap)
            _, xb = heapq.heappop(heap)
            joined = joined_lit(xa, xb)
            heapq.heappush(heap, (lv[lit_node(joined)], joined))
        root_level, root = heap[0]
        assert root_level <= src_levels[n], "balance must not deepen a tree"
        if root_level < src_levels[n] or len(unique) < len(mapped):
            applied += 1
        m[n] = root

    for name, d in src.pos:
        dst.add_po(name, lit_not_if(m[lit_node(d)], lit_is_compl(d)))
    return _outcome(aig, dst.cleanup(), applied)


# -- rewrite -----------------------------------------------------------------

def rewrite(aig: Aig, zero_cost: bool = False,
            library: NpnLibrary | None = None,
            cut_size: int = DEFAULT_CUT_SIZE,
            max_cuts: int = DEFAULT_MAX_CUTS) -> TransformOutcome:
    """Replace 4-feasible cuts with minimal library templates."""
    lib = library if library is not None else default_library()

    def candidate_fn_of(src: Aig, rb: _Rebuild):
        all_cuts = enumerate_cuts(src, k=cut_size, max_cuts=max_cuts)

        def candidates(n: int):
            builders = []
            for cut in all_cuts[n]:
                if len(cut) < 2:
                    continue
                table = cone_table(src, n, cut, num_vars=4)
                if table is None:
                    continue
                hit = lib.lookup(table)
                if hit is None:
                    continue
                expr, perm_idx, mask, out, _ = hit
                builders.append(_template_builder(
                    rb, expr, PERMS[perm_idx], mask, out, cut))
            return builders

        return candidates

    return _run_rebuild(aig, candidate_fn_of, zero_cost)


def _template_builder(rb: _Rebuild, expr: str, perm, mask: int, out: int,
                      cut: tuple[int, ...]):
    def build() -> int:
        inputs = []
        for j in range(4):
            src_leaf = perm[j]
            if src_leaf < len(cut):
                base = rb.m[cut[src_leaf]]
            else:
                base = CONST0  # vacuous padded variable
            inputs.append(lit_not_if(base, bool((mask >> j) & 1)))
        root = eval_expr(expr, inputs, rb.add, lit_not, CONST0)
        return lit_not_if(root, bool(out))

    return build


# -- refactor ----------------------------------------------------------------

def _pick_cover(tt: int, num_vars: int) -> tuple[list, int] | None:
    """ISOP of the cone in the cheaper phase: (cubes, output phase)."""
    mask = table_mask(num_vars)
    pos = isop(tt, tt, num_vars)
    neg = isop(tt ^ mask, tt ^ mask, num_vars)

    def literal_count(cubes):
        return sum(bin(p).count("1") + bin(q).count("1") for p, q in cubes)

    pick_neg = (len(neg), literal_count(neg)) < (len(pos), literal_count(pos))
    cubes = neg if pick_neg else pos
    if len(cubes) > MAX_ISOP_CUBES:
        return None
    return cubes, int(pick_neg)


def _factored_builder(rb: _Rebuild, cubes: list, phase: int,
                      leaves: tuple[int, ...]):
    """Greedy algebraic factoring of a cube cover into tracked AIG nodes."""

    def leaf_lit(var: int, neg: bool) -> int:
        return lit_not_if(rb.m[leaves[var]], neg)

    def and_tree(lits: list[int]) -> int:
        frontier = lits or [CONST1]
        while len(frontier) > 1:
            nxt = [rb.add(frontier[i], frontier[i + 1])
                   for i in range(0, len(frontier) - 1, 2)]
            if len(frontier) % 2:
                nxt.append(frontier[-1])
            frontier = nxt
        return frontier[0]

    def or2(a: int, b: int) -> int:
        return lit_not(rb.add(lit_not(a), lit_not(b)))

    def cube_lit(cube) -> int:
        pos, neg = cube
        lits = [leaf_lit(v, False) for v in range(len(leaves)) if (pos >> v) & 1]
        lits += [leaf_lit(v, True) for v in range(len(leaves)) if (neg >> v) & 1]
        return and_tree(lits)

    def most_common(cubes) -> tuple[int, bool] | None:
        counts: dict[tuple[int, bool], int] = {}
        for p, q in cubes:
            for v in range(len(leaves)):
                if (p >> v) & 1:
                    counts[(v, False)] = counts.get((v, False), 0) + 1
                if (q >> v) & 1:
                    counts[(v, True)] = counts.get((v, True), 0) + 1
        best = None
        for key in sorted(counts):
            if counts[key] >= 2 and (best is None or counts[key] > counts[best]):
                best = key
        return best

    def build_cover(cubes) -> int:
        if not cubes:
            return CONST0
        if len(cubes) == 1:
            return cube_lit(cubes[0])
        lit = most_common(cubes)
        if lit is None:
            acc = cube_lit(cubes[0])
            for c in cubes[1:]:
                acc = or2(acc, cube_lit(c))
            return acc
        v, neg = lit
        bit = 1 << v
        with_lit = [(p & ~bit, q & ~bit) for p, q in cubes
                    if ((q if neg else p) >> v) & 1]
        rest = [c for c in cubes if not (((c[1] if neg else c[0]) >> v) & 1)]
        lhs = rb.add(leaf_lit(v, neg), build_cover(with_lit))
        if not rest:
            return lhs
        return or2(lhs, build_cover(rest))

    def build() -> int:
        return lit_not_if(build_cover(cubes), bool(phase))

    return build


def refactor(aig: Aig, zero_cost: bool = False,
             max_cone_inputs: int = DEFAULT_CONE_INPUTS) -> TransformOutcome:
    """Resynthesize MFFC-based cones through ISOP and algebraic factoring."""
    if not 2 <= max_cone_inputs <= 12:
        raise ValueError("max_cone_inputs must be within [2, 12]")

    def candidate_fn_of(src: Aig, rb: _Rebuild):
        fanout = _fanout_counts(src)

        def candidates(n: int):
            leaves = _grow_cone(src, n, fanout, max_cone_inputs)
            if leaves is None or len(leaves) < 2:
                return []
            tt = cone_table(src, n, leaves)
            if tt is None:
                return []
            picked = _pick_cover(tt, len(leaves))
            if picked is None:
                return []
            cubes, phase = picked
            return [_factored_builder(rb, cubes, phase, leaves)]

        return candidates

    return _run_rebuild(aig, candidate_fn_of, zero_cost)


# -- resubstitution ------------------------------------------------------------

def resubstitute(aig: Aig, zero_cost: bool = False,
                 max_window_inputs: int = DEFAULT_WINDOW_INPUTS) -> TransformOutcome:
    """Re-express nodes as (complemented) divisors or two-divisor AND/OR."""
    if not 2 <= max_window_inputs <= 12:
        raise ValueError("max_window_inputs must be within [2, 12]")

    def candidate_fn_of(src: Aig, rb: _Rebuild):
        fanout = _fanout_counts(src)
        consumers: list[list[int]] = [[] for _ in range(len(src))]
        for i in range(len(src)):
            if src.is_and(i):
                fa, fb = src.fanins(i)
                consumers[lit_node(fa)].append(i)
                consumers[lit_node(fb)].append(i)

        def candidates(n: int):
            leaves = _grow_cone(src, n, fanout, max_window_inputs)
            if leaves is None:
                return []
            num_vars = len(leaves)
            mask = table_mask(num_vars)
            tts = _window_tables(src, n, leaves, consumers)
            if tts is None:
                return []
            target = tts.pop(n)
            mffc = _mffc_set(src, n, fanout)
            divisors = sorted(d for d in tts
                              if d < n and d not in mffc)[:MAX_DIVISORS]

            builders = []
            if target == 0:
                builders.append(lambda: CONST0)
            elif target == mask:
                builders.append(lambda: CONST1)
            zero_hits = []
            for d in divisors:
                if tts[d] == target:
                    zero_hits.append((d, 0))
                elif tts[d] ^ mask == target:
                    zero_hits.append((d, 1))
            for d, p in zero_hits:
                builders.append(_divisor_builder(rb, d, p))

            def phase_tt(d: int, p: int) -> int:
                return tts[d] ^ (mask if p else 0)

            # AND pair: both sides must cover the target from above
            and_parts = [(d, p) for d in divisors for p in (0, 1)
                         if target & ~phase_tt(d, p) & mask == 0
                         and phase_tt(d, p) != target][:MAX_PAIR_DIVISORS]
            for i in range(len(and_parts)):
                for j in range(i + 1, len(and_parts)):
                    (d1, p1), (d2, p2) = and_parts[i], and_parts[j]
                    if phase_tt(d1, p1) & phase_tt(d2, p2) == target:
                        builders.append(_pair_builder(rb, d1, p1, d2, p2, False))

            # OR pair: both sides must stay inside the target
            or_parts = [(d, p) for d in divisors for p in (0, 1)
                        if phase_tt(d, p) & ~target & mask == 0
                        and phase_tt(d, p) != target][:MAX_PAIR_DIVISORS]
            for i in range(len(or_parts)):
                for j in range(i + 1, len(or_parts)):
                    (d1, p1), (d2, p2) = or_parts[i], or_parts[j]
                    if phase_tt(d1, p1) | phase_tt(d2, p2) == target:
                        builders.append(_pair_builder(rb, d1, p1, d2, p2, True))
            return builders

        return candidates

    return _run_rebuild(aig, candidate_fn_of, zero_cost)


def _divisor_builder(rb: _Rebuild, divisor: int, phase: int):
    def build() -> int:
        return lit_not_if(rb.m[divisor], bool(phase))

    return build


def _pair_builder(rb: _Rebuild, d1: int, p1: int, d2: int, p2: int,
                  is_or: bool):
    def build() -> int:
        a = lit_not_if(rb.m[d1], bool(p1))
        b = lit_not_if(rb.m[d2], bool(p2))
        if is_or:
            return lit_not(rb.add(lit_not(a), lit_not(b)))
        return rb.add(a, b)

    return build


def _window_tables(src: Aig, n: int, leaves: tuple[int, ...],
                   consumers: list[list[int]]) -> dict[int, int] | None:
    """Truth tables over the window for leaves, the cone and side nodes."""
    num_vars = len(leaves)
    mask = table_mask(num_vars)
    tts: dict[int, int] = {0: 0}
    for i, leaf in enumerate(leaves):
        tts[leaf] = var_projection(i, num_vars)

    def eval_node(x: int) -> bool:
        a, b = src.fanins(x)
        na, nb = lit_node(a), lit_node(b)
        if na not in tts or nb not in tts:
            return False
        va = tts[na] ^ (mask if lit_is_compl(a) else 0)
        vb = tts[nb] ^ (mask if lit_is_compl(b) else 0)
        tts[x] = va & vb
        return True

    # the cone of n over the leaves
    stack = [n]
    while stack:
        x = stack[-1]
        if x in tts:
            stack.pop()
            continue
        if not src.is_and(x):
            return None
        a, b = src.fanins(x)
        missing = [f for f in (lit_node(a), lit_node(b)) if f not in tts]
        if missing:
            stack.extend(missing)
            continue
        stack.pop()
        eval_node(x)

    # widen with side nodes fully supported by the window
    work = sorted(tts)
    seen_work = set(work)
    while work and len(tts) < 4 * MAX_DIVISORS:
        x = work.pop(0)
        for c in consumers[x]:
            if c in tts or c in seen_work or c >= n:
                continue
            if eval_node(c):
                seen_work.add(c)
                work.append(c)
    return tts
