"""BENCH netlist reader and writer.

The reader accepts `#` comments, ``INPUT(x)``, ``OUTPUT(x)`` and
``y = GATE(a, b, ...)`` statements with case-insensitive gate names
(AND, OR, NAND, NOR, NOT, BUFF/BUF, XOR, XNOR) and forward references.
N-ary gates elaborate to balanced trees of 2-input ANDs.  DFF statements
are rejected unless ``cut_sequential`` is set, in which case each flop is
cut into a fresh PI (its output) and a PO named ``<output>_next`` (its
input), the usual combinational framing.

The writer emits only INPUT/OUTPUT/AND/NOT/BUFF statements, names internal
nodes ``n<index>`` and is deterministic, so equal AIGs produce identical
bytes and every file re-parses to a functionally-equivalent AIG with the
same PI/PO names.
"""

from __future__ import annotations

import re

from .aig import CONST0, Aig, AigError, and_tree, lit_is_compl, lit_node, lit_not, or_tree

_GATES = {"AND", "OR", "NAND", "NOR", "NOT", "BUFF", "BUF", "XOR", "XNOR"}

_NAME = r"[^\s()=,#]+"
_RE_INPUT = re.compile(rf"^INPUT\s*\(\s*({_NAME})\s*\)$", re.IGNORECASE)
_RE_OUTPUT = re.compile(rf"^OUTPUT\s*\(\s*({_NAME})\s*\)$", re.IGNORECASE)
_RE_GATE = re.compile(
    rf"^({_NAME})\s*=\s*([A-Za-z]+)\s*\(\s*({_NAME}(?:\s*,\s*{_NAME})*)\s*\)$")


class BenchError(AigError):
    """Syntax or semantic error in a BENCH file, with a line number."""


def _xor_tree(aig: Aig, lits: list[int]) -> int:
    frontier = list(lits)
    if not frontier:
        return CONST0
    while len(frontier) > 1:
        nxt = [aig.add_xor(frontier[i], frontier[i + 1])
               for i in range(0, len(frontier) - 1, 2)]
        if len(frontier) % 2:
            nxt.append(frontier[-1])
        frontier = nxt
    return frontier[0]


def parse_bench(text: str, cut_sequential: bool = False) -> Aig:
    """Elaborate BENCH source into a structurally-hashed AIG.

    Gate statements that drive no output are still elaborated; callers
    wanting a trimmed graph run ``cleanup`` afterwards.
    """
    inputs: list[tuple[str, int]] = []          # (name, line)
    outputs: list[tuple[str, int]] = []
    gates: dict[str, tuple[str, list[str], int]] = {}  # name -> (kind, args, line)
    gate_order: list[str] = []
    flop_outputs: list[tuple[str, str, int]] = []      # (q, d, line)

    defined: set[str] = set()
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _RE_INPUT.match(line)
        if m:
            name = m.group(1)
            if name in defined:
                raise BenchError(f"line {ln}: duplicate definition of {name!r}")
            defined.add(name)
            inputs.append((name, ln))
            continue
        m = _RE_OUTPUT.match(line)
        if m:
            outputs.append((m.group(1), ln))
            continue
        m = _RE_GATE.match(line)
        if m:
            name, kind, argstr = m.group(1), m.group(2).upper(), m.group(3)
            args = [a.strip() for a in argstr.split(",")]
            if name in defined:
                raise BenchError(f"line {ln}: duplicate definition of {name!r}")
            defined.add(name)
            if kind == "DFF":
                if not cut_sequential:
                    raise BenchError(
                        f"line {ln}: sequential element DFF not supported "
                        "(pass cut_sequential to cut flops)")
                if len(args) != 1:
                    raise BenchError(f"line {ln}: DFF takes exactly one argument")
                flop_outputs.append((name, args[0], ln))
                continue
            if kind not in _GATES:
                raise BenchError(f"line {ln}: unsupported gate {kind!r}")
            if kind in ("NOT", "BUFF", "BUF") and len(args) != 1:
                raise BenchError(f"line {ln}: {kind} takes exactly one argument")
            gates[name] = (kind, args, ln)
            gate_order.append(name)
            continue
        raise BenchError(f"line {ln}: cannot parse {line!r}")

    aig = Aig()
    value: dict[str, int] = {}
    for name, _ in inputs:
        value[name] = aig.add_pi(name)
    for q, _, ln in flop_outputs:
        try:
            value[q] = aig.add_pi(q)
        except AigError as exc:
            raise BenchError(f"line {ln}: {exc}") from exc

    def resolve(name: str, use_line: int) -> int:
        """Iterative post-order elaboration with cycle detection."""
        if name in value:
            return value[name]
        if name not in gates:
            raise BenchError(f"line {use_line}: undefined signal {name!r}")
        stack: list[tuple[str, bool]] = [(name, False)]
        on_path: set[str] = set()
        while stack:
            sig, expanded = stack.pop()
            if sig in value:
                continue
            kind, args, ln = gates[sig]
            if expanded:
                on_path.discard(sig)
                lits = [value[a] for a in args]
                if kind == "NOT":
                    value[sig] = lit_not(lits[0])
                elif kind in ("BUFF", "BUF"):
                    value[sig] = lits[0]
                elif kind == "AND":
                    value[sig] = and_tree(aig, lits)
                elif kind == "NAND":
                    value[sig] = lit_not(and_tree(aig, lits))
                elif kind == "OR":
                    value[sig] = or_tree(aig, lits)
                elif kind == "NOR":
                    value[sig] = lit_not(or_tree(aig, lits))
                elif kind == "XOR":
                    value[sig] = _xor_tree(aig, lits)
                else:  # XNOR
                    value[sig] = lit_not(_xor_tree(aig, lits))
                continue
            if sig in on_path:
                raise BenchError(f"line {ln}: combinational cycle through {sig!r}")
            on_path.add(sig)
            stack.append((sig, True))
            for a in args:
                if a not in value:
                    if a not in gates:
                        raise BenchError(
                            f"line {ln}: undefined signal {a!r}")
                    stack.append((a, False))
        return value[name]

    for name in gate_order:
        resolve(name, gates[name][2])
    for name, ln in outputs:
        try:
            aig.add_po(name, resolve(name, ln))
        except AigError as exc:
            raise BenchError(f"line {ln}: {exc}") from exc
    for q, d, ln in flop_outputs:
        try:
            aig.add_po(f"{q}_next", resolve(d, ln))
        except AigError as exc:
            raise BenchError(f"line {ln}: {exc}") from exc
    return aig


def _fresh_prefix(taken: list[str]) -> str:
    """Shortest 'n', 'nn', ... such that no taken name can collide with
    the generated families `<prefix><digits>` and `<prefix><digits>_n`."""
    prefix = "n"
    pattern = re.compile(r"^(n+)[0-9]+(_n)?$")
    depth = 1
    for name in taken:
        m = pattern.match(name)
        if m:
            depth = max(depth, len(m.group(1)) + 1)
    return "n" * depth


def write_bench(aig: Aig) -> str:
    """Serialize to BENCH text; inverse of ``parse_bench`` up to equivalence."""
    taken = list(aig.pi_names) + [n for n, _ in aig.pos]
    prefix = _fresh_prefix(taken)

    name_of: dict[int, str] = {}
    for node, name in zip(aig.pis, aig.pi_names):
        name_of[node] = name
    and_nodes = [i for i in range(len(aig)) if aig.is_and(i)]
    for i in and_nodes:
        name_of[i] = f"{prefix}{i}"

    const_needed = any(lit_node(d) == 0 for _, d in aig.pos)
    if const_needed and not aig.pis:
        raise AigError(
            "cannot express a constant output in BENCH without any input")

    lines: list[str] = []
    for name in aig.pi_names:
        lines.append(f"INPUT({name})")
    for name, _ in aig.pos:
        lines.append(f"OUTPUT({name})")

    inverted: set[int] = set()  # nodes whose NOT line has been emitted

    def inv_name(node: int) -> str:
        if node not in inverted:
            lines.append(f"{prefix}{node}_n = NOT({name_of[node]})")
            inverted.add(node)
        return f"{prefix}{node}_n"

    def lit_name(l: int) -> str:
        node = lit_node(l)
        return inv_name(node) if lit_is_compl(l) else name_of[node]

    if const_needed:
        # constant false as x AND NOT x over the first input
        p = aig.pis[0]
        lines.append(f"{prefix}0 = AND({name_of[p]}, {inv_name(p)})")
        name_of[0] = f"{prefix}0"

    for i in and_nodes:
        a, b = aig.fanins(i)
        lines.append(f"{name_of[i]} = AND({lit_name(a)}, {lit_name(b)})")

    for name, d in aig.pos:
        node = lit_node(d)
        if not lit_is_compl(d) and name_of.get(node) == name:
            continue  # OUTPUT already refers to the right signal
        if name in aig.pi_names:
            raise AigError(
                f"output {name!r} shadows an input of the same name but is "
                "driven by different logic; not expressible in BENCH")
        op = "NOT" if lit_is_compl(d) else "BUFF"
        lines.append(f"{name} = {op}({name_of[node]})")

    return "\n".join(lines) + "\n"
