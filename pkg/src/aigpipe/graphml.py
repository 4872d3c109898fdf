"""GraphML emission for labeled graph datasets.

Each netlist becomes a directed graph: one node per primary input, AND
node and primary output (outputs are materialized so they can carry a
node type), plus the constant node when an output references it.  Node
attributes are ``node_type`` (0=PI, 1=PO, 2=AND, 3=CONST0) and
``num_inverted_predecessors``; every fanin edge and driver edge carries
``edge_type`` (0 plain, 1 inverted).  Output is hand-rendered XML so equal
graphs serialize to identical bytes (UTF-8, LF endings).
"""

from __future__ import annotations

from xml.sax.saxutils import escape

from .aig import Aig, lit_is_compl, lit_node

NODE_TYPE_PI = 0
NODE_TYPE_PO = 1
NODE_TYPE_AND = 2
NODE_TYPE_CONST0 = 3

_HEADER = (
    '<?xml version="1.0" encoding="UTF-8"?>\n'
    '<graphml xmlns="http://graphml.graphdrawing.org/xmlns">\n'
    '  <key id="node_id" for="node" attr.name="node_id" attr.type="string"/>\n'
    '  <key id="node_type" for="node" attr.name="node_type" attr.type="int"/>\n'
    '  <key id="num_inverted_predecessors" for="node"'
    ' attr.name="num_inverted_predecessors" attr.type="int"/>\n'
    '  <key id="edge_type" for="edge" attr.name="edge_type" attr.type="int"/>\n'
)


def write_graphml(aig: Aig, graph_id: str = "aig") -> str:
    const_used = any(lit_node(d) == 0 for _, d in aig.pos)

    lines = [_HEADER + f'  <graph id="{escape(graph_id, {chr(34): "&quot;"})}"'
             ' edgedefault="directed">']

    def node(node_id: str, node_type: int, inv: int) -> None:
        lines.append(
            f'    <node id="{node_id}">'
            f'<data key="node_id">{node_id}</data>'
            f'<data key="node_type">{node_type}</data>'
            f'<data key="num_inverted_predecessors">{inv}</data>'
            '</node>')

    def edge(src: str, dst: str, inverted: bool) -> None:
        lines.append(
            f'    <edge source="{src}" target="{dst}">'
            f'<data key="edge_type">{1 if inverted else 0}</data>'
            '</edge>')

    if const_used:
        node("0", NODE_TYPE_CONST0, 0)
    for i in range(1, len(aig)):
        if aig.is_pi(i):
            node(str(i), NODE_TYPE_PI, 0)
        else:
            a, b = aig.fanins(i)
            node(str(i), NODE_TYPE_AND,
                 int(lit_is_compl(a)) + int(lit_is_compl(b)))
    po_base = len(aig)
    for k, (_, d) in enumerate(aig.pos):
        node(str(po_base + k), NODE_TYPE_PO, int(lit_is_compl(d)))

    for i in range(1, len(aig)):
        if aig.is_and(i):
            a, b = aig.fanins(i)
            edge(str(lit_node(a)), str(i), lit_is_compl(a))
            edge(str(lit_node(b)), str(i), lit_is_compl(b))
    for k, (_, d) in enumerate(aig.pos):
        edge(str(lit_node(d)), str(po_base + k), lit_is_compl(d))

    lines.append("  </graph>")
    lines.append("</graphml>")
    return "\n".join(lines) + "\n"
