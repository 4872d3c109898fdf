import * as fs from "node:fs";
import * as path from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import {
  loadDataset,
  loadManifest,
  loadSample,
  loadSplit,
  ManifestRow,
  SampleLabel,
} from "../src/dataset.js";
import { parseGraphml } from "../src/graphml.js";
import {
  FEATURE_WIDTH,
  NODE_TYPE_AND,
  NODE_TYPE_CONST0,
  NODE_TYPE_PI,
  NODE_TYPE_PO,
} from "../src/graph.js";
import { cleanupFixture, Fixture, makeFixture, makeSplit } from "./fixtures.js";

let fixture: Fixture;
let rows: ManifestRow[];

beforeAll(() => {
  fixture = makeFixture({
    designCount: 2,
    recipes: 6,
    recipeLen: 5,
    seed: 11,
    withTiny: true,
  });
  rows = loadManifest(fixture.manifestPath);
});

afterAll(() => cleanupFixture(fixture));

function step0Nodes(ip: string, recipeId: number): number {
  const row = rows.find(
    (r) => r.ip === ip && r.recipeId === recipeId && r.stepId === 0
  );
  expect(row).toBeDefined();
  return row!.nodes;
}

function readLabel(row: ManifestRow): SampleLabel {
  return JSON.parse(
    fs.readFileSync(path.join(fixture.datasetDir, row.json), "utf-8")
  );
}

describe("manifest", () => {
  it("lists 3 designs x 6 recipes x 6 steps", () => {
    expect(rows.length).toBe(3 * 6 * 6);
    const ips = new Set(rows.map((r) => r.ip));
    expect(ips).toEqual(new Set(["rb0", "rb1", "tiny"]));
  });

  it("rejects a manifest with the wrong header", () => {
    const bad = path.join(fixture.root, "bad.csv");
    fs.writeFileSync(bad, "ip,recipe\nx,1\n");
    expect(() => loadManifest(bad)).toThrow(/header/);
  });
});

describe("graphml parsing", () => {
  it("matches the label's node and edge accounting", () => {
    for (const row of rows.filter((r) => r.stepId === 0)) {
      const graph = parseGraphml(
        fs.readFileSync(path.join(fixture.datasetDir, row.graphml), "utf-8")
      );
      const label = readLabel(row);
      const constNodes = graph.nodeTypes.filter(
        (t) => t === NODE_TYPE_CONST0
      ).length;
      expect(graph.nodeTypes.length).toBe(
        label.pis + label.pos + label.nodes + constNodes
      );
      expect(graph.edges.length).toBe(label.edges);
    }
  });

  it("rejects malformed XML", () => {
    expect(() => parseGraphml("<graphml><node id=\"0\"></graphml>")).toThrow();
  });
});

describe("node features", () => {
  it("one-hot encodes the single-AND design", () => {
    const row = rows.find((r) => r.ip === "tiny" && r.stepId === 0)!;
    const sample = loadSample(fixture.datasetDir, row, row.nodes);
    // 2 PIs + 1 AND + 1 PO, no inverted fanins anywhere
    expect(sample.features.length).toBe(4);
    const byType = new Map<number, number[][]>();
    sample.graph.nodeTypes.forEach((t, i) => {
      const bucket = byType.get(t) ?? [];
      bucket.push(sample.features[i]);
      byType.set(t, bucket);
    });
    expect(byType.get(NODE_TYPE_PI)).toEqual([
      [1, 0, 0, 0],
      [1, 0, 0, 0],
    ]);
    expect(byType.get(NODE_TYPE_AND)).toEqual([[0, 0, 1, 0]]);
    expect(byType.get(NODE_TYPE_PO)).toEqual([[0, 1, 0, 0]]);
    for (const fRow of sample.features) {
      expect(fRow.length).toBe(FEATURE_WIDTH);
    }
  });
});

describe("targets", () => {
  it("is exactly 1.0 when a recipe leaves the node count unchanged", () => {
    // one AND cannot shrink, so final_nodes == step-0 nodes for every recipe
    const row = rows.find((r) => r.ip === "tiny" && r.stepId === 5)!;
    const sample = loadSample(
      fixture.datasetDir,
      row,
      step0Nodes(row.ip, row.recipeId)
    );
    expect(sample.label.final_nodes).toBe(1);
    expect(sample.target).toBe(1.0);
  });

  it("is 0.5 when the recipe halves the node count", () => {
    const row = rows.find((r) => r.ip === "rb0" && r.stepId === 5)!;
    const sample = loadSample(
      fixture.datasetDir,
      row,
      2 * readLabel(row).final_nodes
    );
    expect(sample.target).toBe(0.5);
  });

  it("equals final_nodes / step-0 nodes for every final sample", () => {
    for (const row of rows.filter((r) => r.stepId === 5)) {
      const base = step0Nodes(row.ip, row.recipeId);
      const sample = loadSample(fixture.datasetDir, row, base);
      expect(sample.target).toBe(sample.label.final_nodes / base);
      expect(sample.target).toBeGreaterThan(0);
      expect(sample.recipeVector.length).toBe(5);
    }
  });
});

describe("error paths", () => {
  it("raises on a missing graph file", () => {
    const row = { ...rows[0], graphml: "nope_syn0_step0.graphml" };
    expect(() => loadSample(fixture.datasetDir, row, 10)).toThrow();
  });

  it("raises when the label disagrees with the graph", () => {
    const row = rows.find((r) => r.ip === "rb0" && r.stepId === 0)!;
    const label = readLabel(row);
    label.edges += 1;
    const jsonCopy = "rb0_syn999_step0.json";
    fs.writeFileSync(
      path.join(fixture.datasetDir, jsonCopy),
      JSON.stringify(label)
    );
    const bad = { ...row, json: jsonCopy };
    expect(() => loadSample(fixture.datasetDir, bad, 10)).toThrow(/edges/);
  });
});

describe("splits", () => {
  it("respects the split manifest exactly", () => {
    const split = loadSplit(makeSplit(fixture, 4));
    expect(split.variant).toBe(1);
    const { train, test } = loadDataset(fixture.datasetDir, split);
    expect(train.length).toBe(3 * 4);
    expect(test.length).toBe(3 * 2);
    const trainKeys = new Set(split.train.map(([ip, rid]) => `${ip}/${rid}`));
    const testKeys = new Set(split.test.map(([ip, rid]) => `${ip}/${rid}`));
    for (const s of train) {
      expect(trainKeys.has(`${s.label.ip_name}/${s.label.recipe_id}`)).toBe(true);
      expect(s.label.step_id).toBe(5);
    }
    for (const s of test) {
      expect(testKeys.has(`${s.label.ip_name}/${s.label.recipe_id}`)).toBe(true);
    }
  });

  it("step filters pick step 0 or every positive step", () => {
    const split = loadSplit(makeSplit(fixture, 4));
    const initial = loadDataset(fixture.datasetDir, split, { steps: "initial" });
    expect(initial.train.length).toBe(3 * 4);
    for (const s of initial.train) expect(s.label.step_id).toBe(0);
    const all = loadDataset(fixture.datasetDir, split, { steps: "all" });
    expect(all.train.length).toBe(3 * 4 * 5);
    for (const s of all.train) expect(s.label.step_id).toBeGreaterThan(0);
  });
});
