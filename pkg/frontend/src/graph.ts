/** Graph container and feature encoding shared by the loaders and models. */

export const NODE_TYPE_PI = 0;
export const NODE_TYPE_PO = 1;
export const NODE_TYPE_AND = 2;
export const NODE_TYPE_CONST0 = 3;

export const FEATURE_WIDTH = 4;

export interface Graph {
  /** node_type per node: 0 PI, 1 PO, 2 AND, 3 const0 */
  nodeTypes: number[];
  /** num_inverted_predecessors per node */
  invCounts: number[];
  /** directed [source, target] pairs over node indices */
  edges: Array<[number, number]>;
  /** 1 where the edge is inverted */
  edgeTypes: number[];
}

/**
 * Per-node feature rows: one-hot over {PI, PO, AND} plus the inverted
 * predecessor count. Constant nodes encode as all-zero type bits.
 */
export function featureMatrix(graph: Graph): number[][] {
  return graph.nodeTypes.map((t, i) => {
    const row = [0, 0, 0, graph.invCounts[i]];
    if (t === NODE_TYPE_PI) row[0] = 1;
    else if (t === NODE_TYPE_PO) row[1] = 1;
    else if (t === NODE_TYPE_AND) row[2] = 1;
    else if (t !== NODE_TYPE_CONST0) {
      throw new Error(`unknown node_type ${t} at node ${i}`);
    }
    return row;
  });
}

/**
 * Row-normalized symmetric adjacency with self-loops, dense [n, n].
 * Ignores edge direction: a node's neighborhood is its fanins, fanouts,
 * and itself.
 */
export function normalizedAdjacency(graph: Graph): number[][] {
  const n = graph.nodeTypes.length;
  const adj: number[][] = Array.from({ length: n }, () => new Array(n).fill(0));
  for (let i = 0; i < n; i++) adj[i][i] = 1;
  for (const [s, t] of graph.edges) {
    if (s < 0 || s >= n || t < 0 || t >= n) {
      throw new Error(`edge (${s}, ${t}) outside node range ${n}`);
    }
    adj[s][t] = 1;
    adj[t][s] = 1;
  }
  for (let i = 0; i < n; i++) {
    let degree = 0;
    for (let j = 0; j < n; j++) degree += adj[i][j];
    for (let j = 0; j < n; j++) adj[i][j] /= degree;
  }
  return adj;
}

/** Relabel nodes by `perm`, where new index i holds old node perm[i]. */
export function permuteGraph(graph: Graph, perm: number[]): Graph {
  const n = graph.nodeTypes.length;
  if (perm.length !== n) throw new Error("permutation length mismatch");
  const inverse = new Array<number>(n);
  perm.forEach((old, now) => {
    inverse[old] = now;
  });
  return {
    nodeTypes: perm.map((old) => graph.nodeTypes[old]),
    invCounts: perm.map((old) => graph.invCounts[old]),
    edges: graph.edges.map(([s, t]) => [inverse[s], inverse[t]]),
    edgeTypes: [...graph.edgeTypes],
  };
}
