"""And-inverter graphs: 2-input AND nodes plus complemented edges.

Literals are plain ints, ``2 * node_index + complement_bit``, so they sort,
hash and compare cheaply.  Node 0 is the constant-false node; constant true
is its complement.  AND nodes are created through :meth:`Aig.add_and`, which
applies the usual one-level simplifications and structural hashing, so the
graph never holds two AND nodes with the same ordered fanin pair.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

Lit = int

CONST0: Lit = 0
CONST1: Lit = 1

# _fanin0 sentinels for non-AND nodes
_KIND_CONST = -2
_KIND_PI = -1


def lit(node: int, compl: bool = False) -> Lit:
    return 2 * node + (1 if compl else 0)


def lit_node(l: Lit) -> int:
    return l >> 1


def lit_is_compl(l: Lit) -> bool:
    return bool(l & 1)


def lit_not(l: Lit) -> Lit:
    return l ^ 1


def lit_not_if(l: Lit, c: bool) -> Lit:
    return l ^ 1 if c else l


def lit_regular(l: Lit) -> Lit:
    return l & ~1


class AigError(ValueError):
    """Malformed construction request (dangling literal, bad PO, ...)."""


@dataclass(frozen=True)
class DesignStats:
    """Structural summary of one netlist.

    ``edge_count`` is ``2 * and_count + po_count``: two fanin edges per AND
    node plus one driver edge per primary output.  ``inverted_edge_count``
    counts the complemented ones among exactly those edges.
    """

    pi_count: int
    po_count: int
    and_count: int
    edge_count: int
    inverted_edge_count: int
    depth: int


class Aig:
    """Mutable AIG with structural hashing and topological node numbering."""

    def __init__(self) -> None:
        self._fanin0: list[int] = [_KIND_CONST]
        self._fanin1: list[int] = [0]
        self.pis: list[int] = []
        self.pi_names: list[str] = []
        self.pos: list[tuple[str, Lit]] = []
        self._strash: dict[tuple[int, int], int] = {}
        self._name_to_pi: dict[str, int] = {}

    # -- queries ---------------------------------------------------------

    def __len__(self) -> int:
        return len(self._fanin0)

    def num_ands(self) -> int:
        return sum(1 for f in self._fanin0 if f >= 0)

    def is_const(self, node: int) -> bool:
        return self._fanin0[node] == _KIND_CONST

    def is_pi(self, node: int) -> bool:
        return self._fanin0[node] == _KIND_PI

    def is_and(self, node: int) -> bool:
        return self._fanin0[node] >= 0

    def fanins(self, node: int) -> tuple[Lit, Lit]:
        if not self.is_and(node):
            raise AigError(f"node {node} is not an AND node")
        return self._fanin0[node], self._fanin1[node]

    def pi_name(self, node: int) -> str:
        return self.pi_names[self.pis.index(node)]

    def find_pi(self, name: str) -> Lit | None:
        node = self._name_to_pi.get(name)
        return None if node is None else lit(node)

    def _check_lit(self, l: Lit) -> None:
        if l < 0 or lit_node(l) >= len(self._fanin0):
            raise AigError(f"dangling literal {l}")

    # -- construction ----------------------------------------------------

    def add_pi(self, name: str | None = None) -> Lit:
        node = len(self._fanin0)
        if name is None:
            name = f"pi{len(self.pis)}"
        if name in self._name_to_pi:
            raise AigError(f"duplicate primary input name {name!r}")
        self._fanin0.append(_KIND_PI)
        self._fanin1.append(0)
        self.pis.append(node)
        self.pi_names.append(name)
        self._name_to_pi[name] = node
        return lit(node)

    def add_and(self, a: Lit, b: Lit) -> Lit:
        self._check_lit(a)
        self._check_lit(b)
        # one-level rules
        if a == b:
            return a
        if a == lit_not(b):
            return CONST0
        if a == CONST0 or b == CONST0:
            return CONST0
        if a == CONST1:
            return b
        if b == CONST1:
            return a
        if a > b:
            a, b = b, a
        key = (a, b)
        node = self._strash.get(key)
        if node is not None:
            return lit(node)
        node = len(self._fanin0)
        self._fanin0.append(a)
        self._fanin1.append(b)
        self._strash[key] = node
        return lit(node)

    def add_or(self, a: Lit, b: Lit) -> Lit:
        return lit_not(self.add_and(lit_not(a), lit_not(b)))

    def add_xor(self, a: Lit, b: Lit) -> Lit:
        return lit_not(self.add_and(lit_not(self.add_and(a, lit_not(b))),
                                    lit_not(self.add_and(lit_not(a), b))))

    def add_po(self, name: str, driver: Lit) -> None:
        self._check_lit(driver)
        if any(n == name for n, _ in self.pos):
            raise AigError(f"duplicate primary output name {name!r}")
        self.pos.append((name, driver))

    # -- statistics ------------------------------------------------------

    def levels(self) -> list[int]:
        """Per-node logic level: PIs and the constant sit at level 0."""
        lv = [0] * len(self._fanin0)
        f0, f1 = self._fanin0, self._fanin1
        for i in range(len(lv)):
            if f0[i] >= 0:
                a = lv[f0[i] >> 1]
                b = lv[f1[i] >> 1]
                lv[i] = 1 + (a if a > b else b)
        return lv

    def depth(self) -> int:
        if not self.pos:
            return 0
        lv = self.levels()
        return max(lv[lit_node(d)] for _, d in self.pos)

    def stats(self) -> DesignStats:
        n = self.num_ands()
        po = len(self.pos)
        inverted = sum(lit_is_compl(d) for _, d in self.pos)
        for i in range(len(self._fanin0)):
            if self._fanin0[i] >= 0:
                inverted += (self._fanin0[i] & 1) + (self._fanin1[i] & 1)
        return DesignStats(
            pi_count=len(self.pis),
            po_count=po,
            and_count=n,
            edge_count=2 * n + po,
            inverted_edge_count=inverted,
            depth=self.depth(),
        )

    # -- simulation ------------------------------------------------------

    def simulate(self, input_words: Sequence[int], width: int | None = None) -> list[int]:
        """Bit-parallel evaluation; one word per PI, one word per PO.

        Words are arbitrary-precision ints treated as bit vectors.  ``width``
        masks the result; when omitted it defaults to the widest input word
        (or 1 for a PI-less graph).
        """
        if len(input_words) != len(self.pis):
            raise AigError(
                f"expected {len(self.pis)} input words, got {len(input_words)}")
        if width is None:
            width = max((w.bit_length() for w in input_words), default=1)
            width = max(width, 1)
        mask = (1 << width) - 1
        val = [0] * len(self._fanin0)
        for node, word in zip(self.pis, input_words):
            val[node] = word & mask
        f0, f1 = self._fanin0, self._fanin1
        for i in range(len(val)):
            a = f0[i]
            if a >= 0:
                b = f1[i]
                va = val[a >> 1] ^ (mask if a & 1 else 0)
                vb = val[b >> 1] ^ (mask if b & 1 else 0)
                val[i] = va & vb
        out = []
        for _, d in self.pos:
            v = val[lit_node(d)]
            out.append((v ^ mask) if lit_is_compl(d) else v)
        return out

    # -- cleanup ---------------------------------------------------------

    def cleanup(self) -> "Aig":
        """Copy without AND nodes that are unreachable from any PO.

        PIs are kept (in order) even when unused; PO names, order and
        functions are preserved.  Node indices are renumbered, so literals
        into the old graph are invalid for the new one.
        """
        reach = bytearray(len(self._fanin0))
        stack = [lit_node(d) for _, d in self.pos]
        f0, f1 = self._fanin0, self._fanin1
        while stack:
            node = stack.pop()
            if reach[node]:
                continue
            reach[node] = 1
            if f0[node] >= 0:
                stack.append(f0[node] >> 1)
                stack.append(f1[node] >> 1)
        new = Aig()
        remap: dict[int, Lit] = {0: CONST0}
        for node, name in zip(self.pis, self.pi_names):
            remap[node] = new.add_pi(name)
        for node in range(1, len(f0)):
            if reach[node] and f0[node] >= 0:
                a, b = f0[node], f1[node]
                remap[node] = new.add_and(lit_not_if(remap[a >> 1], bool(a & 1)),
                                          lit_not_if(remap[b >> 1], bool(b & 1)))
        for name, d in self.pos:
            new.add_po(name, lit_not_if(remap[lit_node(d)], lit_is_compl(d)))
        return new

    # -- integrity -------------------------------------------------------

    def check(self) -> None:
        """Assert the structural invariants; test/debug helper."""
        seen: set[tuple[int, int]] = set()
        for i in range(len(self._fanin0)):
            a = self._fanin0[i]
            if a < 0:
                continue
            b = self._fanin1[i]
            assert (a >> 1) < i and (b >> 1) < i, f"node {i} not topological"
            assert a < b, f"node {i} fanins not in canonical order"
            assert (a, b) not in seen, f"duplicate structure at node {i}"
            seen.add((a, b))
            assert self._strash.get((a, b)) == i, f"strash out of sync at {i}"
        assert len(seen) == len(self._strash), "stale strash entries"
        for name, d in self.pos:
            assert lit_node(d) < len(self._fanin0), f"PO {name} dangles"


def and_tree(aig: Aig, literals: Iterable[Lit]) -> Lit:
    """Balanced conjunction of ``literals`` (constant true when empty)."""
    frontier = list(literals)
    if not frontier:
        return CONST1
    while len(frontier) > 1:
        nxt = [aig.add_and(frontier[i], frontier[i + 1])
               for i in range(0, len(frontier) - 1, 2)]
        if len(frontier) % 2:
            nxt.append(frontier[-1])
        frontier = nxt
    return frontier[0]


def or_tree(aig: Aig, literals: Iterable[Lit]) -> Lit:
    """Balanced disjunction (constant false when empty)."""
    return lit_not(and_tree(aig, [lit_not(l) for l in literals]))
