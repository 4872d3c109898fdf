/** Loading of pipeline datasets: manifest, labels, graphs, and splits. */

import * as fs from "node:fs";
import * as path from "node:path";

import {
  FEATURE_WIDTH,
  Graph,
  NODE_TYPE_CONST0,
  featureMatrix,
} from "./graph.js";
import { parseGraphml } from "./graphml.js";

export interface SampleLabel {
  ip_name: string;
  recipe_id: number;
  step_id: number;
  recipe_tokens: number[];
  pis: number;
  pos: number;
  nodes: number;
  inverters: number;
  edges: number;
  depth: number;
  final_nodes: number;
  area_proxy: number;
  delay_proxy: number;
}

export interface GraphSample {
  graph: Graph;
  /** per-node rows of width 4 */
  features: number[][];
  /** the recipe's integer code vector */
  recipeVector: number[];
  /** final_nodes / step-0 nodes for this (ip, recipe) */
  target: number;
  label: SampleLabel;
}

export interface ManifestRow {
  ip: string;
  recipeId: number;
  stepId: number;
  nodes: number;
  depth: number;
  graphml: string;
  json: string;
}

export interface SplitManifest {
  variant: number;
  train: Array<[string, number]>;
  test: Array<[string, number]>;
  seed: number;
}

/** Which snapshots become samples: the final step, step 0, or all steps. */
export type StepFilter = "final" | "initial" | "all";

export function loadManifest(manifestPath: string): ManifestRow[] {
  const lines = fs
    .readFileSync(manifestPath, "utf-8")
    .split(/\r?\n/)
    .filter((l) => l.length > 0);
  const header = "ip,recipe_id,step_id,nodes,depth,graphml,json";
  if (lines[0] !== header) {
    throw new Error(`unexpected manifest header: ${lines[0]}`);
  }
  return lines.slice(1).map((line) => {
    const parts = line.split(",");
    if (parts.length !== 7) throw new Error(`bad manifest line: ${line}`);
    return {
      ip: parts[0],
      recipeId: Number(parts[1]),
      stepId: Number(parts[2]),
      nodes: Number(parts[3]),
      depth: Number(parts[4]),
      graphml: parts[5],
      json: parts[6],
    };
  });
}

export function loadSplit(splitPath: string): SplitManifest {
  const d = JSON.parse(fs.readFileSync(splitPath, "utf-8"));
  return {
    variant: d.variant,
    train: d.train.map(([ip, rid]: [string, number]) => [ip, rid]),
    test: d.test.map(([ip, rid]: [string, number]) => [ip, rid]),
    seed: d.seed,
  };
}

export function checkLabelConsistency(
  graph: Graph,
  label: SampleLabel,
  file: string
): void {
  const constNodes = graph.nodeTypes.filter(
    (t) => t === NODE_TYPE_CONST0
  ).length;
  const expected = label.pis + label.pos + label.nodes + constNodes;
  if (graph.nodeTypes.length !== expected) {
    throw new Error(
      `${file}: graph has ${graph.nodeTypes.length} nodes, label implies ${expected}`
    );
  }
  if (graph.edges.length !== label.edges) {
    throw new Error(
      `${file}: graph has ${graph.edges.length} edges, label says ${label.edges}`
    );
  }
}

export function loadSample(
  datasetDir: string,
  row: ManifestRow,
  step0Nodes: number
): GraphSample {
  const graph = parseGraphml(
    fs.readFileSync(path.join(datasetDir, row.graphml), "utf-8")
  );
  const label: SampleLabel = JSON.parse(
    fs.readFileSync(path.join(datasetDir, row.json), "utf-8")
  );
  checkLabelConsistency(graph, label, row.graphml);
  const features = featureMatrix(graph);
  if (features.length > 0 && features[0].length !== FEATURE_WIDTH) {
    throw new Error(`feature width ${features[0].length} != ${FEATURE_WIDTH}`);
  }
  return {
    graph,
    features,
    recipeVector: label.recipe_tokens,
    target: label.final_nodes / step0Nodes,
    label,
  };
}

export function selectRows(
  rows: ManifestRow[],
  steps: StepFilter
): ManifestRow[] {
  if (steps === "all") return rows.filter((r) => r.stepId > 0);
  if (steps === "initial") return rows.filter((r) => r.stepId === 0);
  const lastStep = new Map<string, number>();
  for (const r of rows) {
    const key = `${r.ip} ${r.recipeId}`;
    lastStep.set(key, Math.max(lastStep.get(key) ?? 0, r.stepId));
  }
  return rows.filter((r) => r.stepId === lastStep.get(`${r.ip} ${r.recipeId}`));
}

/**
 * Load (train, test) GraphSample collections per the split manifest.
 * By default one sample per (ip, recipe) is taken at the final step;
 * `steps` admits step-0 graphs or every intermediate step instead.
 */
export function loadDataset(
  datasetDir: string,
  split: SplitManifest,
  opts: { steps?: StepFilter } = {}
): { train: GraphSample[]; test: GraphSample[] } {
  const rows = loadManifest(path.join(datasetDir, "manifest.csv"));
  const step0 = new Map<string, number>();
  for (const r of rows) {
    if (r.stepId === 0) step0.set(`${r.ip} ${r.recipeId}`, r.nodes);
  }
  const selected = selectRows(rows, opts.steps ?? "final");
  const trainKeys = new Set(split.train.map(([ip, rid]) => `${ip} ${rid}`));
  const testKeys = new Set(split.test.map(([ip, rid]) => `${ip} ${rid}`));
  const train: GraphSample[] = [];
  const test: GraphSample[] = [];
  for (const row of selected) {
    const key = `${row.ip} ${row.recipeId}`;
    const bucket = trainKeys.has(key) ? train : testKeys.has(key) ? test : null;
    if (bucket === null) continue;
    const base = step0.get(key);
    if (base === undefined) {
      throw new Error(`no step-0 row for ${row.ip} recipe ${row.recipeId}`);
    }
    bucket.push(loadSample(datasetDir, row, base));
  }
  return { train, test };
}
