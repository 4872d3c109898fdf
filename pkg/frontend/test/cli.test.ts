import * as fs from "node:fs";
import * as path from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { main } from "../src/cli.js";
import { cleanupFixture, Fixture, makeFixture, makeSplit } from "./fixtures.js";

let fixture: Fixture;
let splitPath: string;

beforeAll(() => {
  fixture = makeFixture({ designCount: 3, recipes: 4, recipeLen: 3, seed: 51 });
  splitPath = makeSplit(fixture, 3);
});

afterAll(() => cleanupFixture(fixture));

describe("qor cli", () => {
  it("trains and writes metrics plus a scatter csv", async () => {
    const metricsPath = path.join(fixture.root, "metrics.json");
    const scatterPath = path.join(fixture.root, "scatter.csv");
    const code = await main([
      "train",
      "--dataset",
      fixture.datasetDir,
      "--split",
      splitPath,
      "--net",
      "Net1",
      "--epochs",
      "2",
      "--seed",
      "5",
      "--metrics",
      metricsPath,
      "--scatter",
      scatterPath,
    ]);
    expect(code).toBe(0);
    const metrics = JSON.parse(fs.readFileSync(metricsPath, "utf-8"));
    expect(metrics.net).toBe("Net1");
    expect(metrics.train_samples).toBe(9);
    expect(metrics.test_samples).toBe(3);
    expect(metrics.train_mse).toBeGreaterThan(0);
    expect(metrics.test_mse).toBeGreaterThan(0);
    const scatter = fs.readFileSync(scatterPath, "utf-8").trim().split("\n");
    expect(scatter.length).toBe(1 + 3);
  }, 120_000);

  it("runs the classifier check and dumps embeddings", async () => {
    const embPath = path.join(fixture.root, "emb.tsv");
    const code = await main([
      "classify",
      "--per-family",
      "4",
      "--epochs",
      "2",
      "--embeddings",
      embPath,
    ]);
    expect(code).toBe(0);
    const rows = fs.readFileSync(embPath, "utf-8").trim().split("\n");
    expect(rows.length).toBe(12);
  }, 120_000);

  it("rejects bad invocations", async () => {
    expect(await main(["train"])).toBe(2);
    expect(await main(["train", "--dataset"])).toBe(2);
    expect(
      await main(["train", "--dataset", "x", "--split", "y", "--net", "NetX"])
    ).toBe(2);
    expect(await main(["frobnicate"])).toBe(2);
    expect(await main([])).toBe(0);
  });
});
