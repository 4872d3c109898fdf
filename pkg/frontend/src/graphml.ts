/** Reader for the GraphML files emitted by the dataset pipeline. */

import { Graph } from "./graph.js";

const NODE_RE =
  /<node id="(\d+)">(?:<data key="node_id">\d+<\/data>)?<data key="node_type">(\d+)<\/data><data key="num_inverted_predecessors">(\d+)<\/data><\/node>/g;
const EDGE_RE =
  /<edge source="(\d+)" target="(\d+)"><data key="edge_type">(\d+)<\/data><\/edge>/g;

/**
 * Parse one GraphML document into a Graph. Node ids are remapped to
 * dense positional indices in document order; edges follow suit.
 */
export function parseGraphml(text: string): Graph {
  const nodeTypes: number[] = [];
  const invCounts: number[] = [];
  const index = new Map<string, number>();

  for (const m of text.matchAll(NODE_RE)) {
    if (index.has(m[1])) throw new Error(`duplicate node id ${m[1]}`);
    index.set(m[1], nodeTypes.length);
    nodeTypes.push(Number(m[2]));
    invCounts.push(Number(m[3]));
  }
  const declaredNodes = (text.match(/<node /g) ?? []).length;
  if (declaredNodes !== nodeTypes.length) {
    throw new Error(
      `parsed ${nodeTypes.length} of ${declaredNodes} node records; ` +
        "a record is missing its node_type or num_inverted_predecessors key"
    );
  }

  const edges: Array<[number, number]> = [];
  const edgeTypes: number[] = [];
  for (const m of text.matchAll(EDGE_RE)) {
    const source = index.get(m[1]);
    const target = index.get(m[2]);
    if (source === undefined || target === undefined) {
      throw new Error(`edge references unknown node: ${m[1]} -> ${m[2]}`);
    }
    edges.push([source, target]);
    edgeTypes.push(Number(m[3]));
  }
  const declaredEdges = (text.match(/<edge /g) ?? []).length;
  if (declaredEdges !== edges.length) {
    throw new Error(`parsed ${edges.length} of ${declaredEdges} edge records`);
  }

  return { nodeTypes, invCounts, edges, edgeTypes };
}
