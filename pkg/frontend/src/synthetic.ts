/** Synthetic netlist-shaped graph families for classifier smoke tests. */

import {
  Graph,
  NODE_TYPE_AND,
  NODE_TYPE_PI,
  NODE_TYPE_PO,
  featureMatrix,
} from "./graph.js";
import { ClassSample } from "./classify.js";
import { mulberry32 } from "./train.js";

export const FAMILY_NAMES = ["chain", "tree", "star"] as const;

function emptyGraph(): Graph {
  return { nodeTypes: [], invCounts: [], edges: [], edgeTypes: [] };
}

function addNode(g: Graph, type: number, inv: number): number {
  g.nodeTypes.push(type);
  g.invCounts.push(inv);
  return g.nodeTypes.length - 1;
}

function addEdge(g: Graph, src: number, dst: number, type: number): void {
  g.edges.push([src, dst]);
  g.edgeTypes.push(type);
}

/** A long AND chain: one fresh input feeds each stage. */
export function chainGraph(length: number, rand: () => number): Graph {
  const g = emptyGraph();
  let prev = addNode(g, NODE_TYPE_PI, 0);
  for (let i = 0; i < length; i++) {
    const side = addNode(g, NODE_TYPE_PI, 0);
    const inv = rand() < 0.3 ? 1 : 0;
    const and = addNode(g, NODE_TYPE_AND, inv);
    addEdge(g, prev, and, 1);
    addEdge(g, side, and, inv ? 2 : 1);
    prev = and;
  }
  const po = addNode(g, NODE_TYPE_PO, 0);
  addEdge(g, prev, po, 1);
  return g;
}

/** A balanced binary AND tree over 2^depth inputs. */
export function treeGraph(depth: number, rand: () => number): Graph {
  const g = emptyGraph();
  let level: number[] = [];
  for (let i = 0; i < 1 << depth; i++) level.push(addNode(g, NODE_TYPE_PI, 0));
  while (level.length > 1) {
    const next: number[] = [];
    for (let i = 0; i < level.length; i += 2) {
      const inv = rand() < 0.3 ? 1 : 0;
      const and = addNode(g, NODE_TYPE_AND, inv);
      addEdge(g, level[i], and, 1);
      addEdge(g, level[i + 1], and, inv ? 2 : 1);
      next.push(and);
    }
    level = next;
  }
  const po = addNode(g, NODE_TYPE_PO, 0);
  addEdge(g, level[0], po, 1);
  return g;
}

/** A shallow fan-in star: many two-input ANDs sharing one hub input. */
export function starGraph(leaves: number, rand: () => number): Graph {
  const g = emptyGraph();
  const hub = addNode(g, NODE_TYPE_PI, 0);
  for (let i = 0; i < leaves; i++) {
    const leaf = addNode(g, NODE_TYPE_PI, 0);
    const inv = rand() < 0.3 ? 1 : 0;
    const and = addNode(g, NODE_TYPE_AND, inv);
    addEdge(g, hub, and, 1);
    addEdge(g, leaf, and, inv ? 2 : 1);
    const po = addNode(g, NODE_TYPE_PO, 0);
    addEdge(g, and, po, 1);
  }
  return g;
}

/** Builds `perFamily` samples from each of the three families. */
export function makeClassDataset(perFamily: number, seed = 7): ClassSample[] {
  const rand = mulberry32(seed);
  const samples: ClassSample[] = [];
  for (let i = 0; i < perFamily; i++) {
    const graphs: Graph[] = [
      chainGraph(8 + Math.floor(rand() * 12), rand),
      treeGraph(3 + Math.floor(rand() * 3), rand),
      starGraph(6 + Math.floor(rand() * 10), rand),
    ];
    graphs.forEach((graph, classIndex) => {
      samples.push({
        graph,
        features: featureMatrix(graph),
        classIndex,
        name: `${FAMILY_NAMES[classIndex]}${i}`,
      });
    });
  }
  return samples;
}
