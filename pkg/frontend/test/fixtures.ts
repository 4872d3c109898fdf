/** Test fixtures: tiny BENCH netlists run through the dataset pipeline CLI. */

import { execFileSync } from "node:child_process";
import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";

import { mulberry32 } from "../src/train.js";

/** Random multi-level netlist text; redundancy-rich so recipes bite. */
export function randomBench(seed: number, nPis: number, nGates: number): string {
  const rand = mulberry32(seed);
  const ops = ["AND", "OR", "NAND", "NOR", "XOR"];
  const lines: string[] = [];
  const pool: string[] = [];
  for (let i = 0; i < nPis; i++) {
    lines.push(`INPUT(i${i})`);
    pool.push(`i${i}`);
  }
  const gateLines: string[] = [];
  for (let g = 0; g < nGates; g++) {
    const name = `g${g}`;
    if (rand() < 0.15) {
      const a = pool[Math.floor(rand() * pool.length)];
      gateLines.push(`${name} = NOT(${a})`);
    } else {
      const op = ops[Math.floor(rand() * ops.length)];
      const a = pool[Math.floor(rand() * pool.length)];
      let b = pool[Math.floor(rand() * pool.length)];
      if (b === a) b = pool[(pool.indexOf(a) + 1) % pool.length];
      gateLines.push(`${name} = ${op}(${a}, ${b})`);
    }
    pool.push(name);
  }
  const poCount = Math.min(3, nGates);
  for (let k = 0; k < poCount; k++) {
    lines.push(`OUTPUT(g${nGates - 1 - k})`);
  }
  return lines.concat(gateLines).join("\n") + "\n";
}

export const TINY_AND_BENCH = [
  "INPUT(a)",
  "INPUT(b)",
  "OUTPUT(f)",
  "f = AND(a, b)",
  "",
].join("\n");

export interface FixtureOptions {
  designCount: number;
  recipes: number;
  recipeLen: number;
  seed: number;
  /** approximate gate count per random design */
  gates?: number;
  /** also write the single-AND design as design "tiny" */
  withTiny?: boolean;
}

export interface Fixture {
  root: string;
  designsDir: string;
  datasetDir: string;
  manifestPath: string;
}

/** Writes designs, then shells out to the pipeline CLI to build a dataset. */
export function makeFixture(opts: FixtureOptions): Fixture {
  const root = fs.mkdtempSync(path.join(os.tmpdir(), "qor-test-"));
  const designsDir = path.join(root, "designs");
  const datasetDir = path.join(root, "dataset");
  fs.mkdirSync(designsDir);
  for (let d = 0; d < opts.designCount; d++) {
    const gates = opts.gates ?? 18;
    const nPis = 4 + (d % 3);
    fs.writeFileSync(
      path.join(designsDir, `rb${d}.bench`),
      randomBench(opts.seed * 1000 + d, nPis, gates)
    );
  }
  if (opts.withTiny) {
    fs.writeFileSync(path.join(designsDir, "tiny.bench"), TINY_AND_BENCH);
  }
  execFileSync("aigpipe", [
    "gen",
    "--designs",
    designsDir,
    "--recipes",
    String(opts.recipes),
    "--len",
    String(opts.recipeLen),
    "--seed",
    String(opts.seed),
    "--out",
    datasetDir,
  ]);
  return {
    root,
    designsDir,
    datasetDir,
    manifestPath: path.join(datasetDir, "manifest.csv"),
  };
}

/** Variant-1 split over the fixture via the pipeline CLI. */
export function makeSplit(fixture: Fixture, trainRecipes: number): string {
  const splitPath = path.join(fixture.root, "split.json");
  execFileSync("aigpipe", [
    "splits",
    "--manifest",
    fixture.manifestPath,
    "--variant",
    "1",
    "--train-recipes",
    String(trainRecipes),
    "--seed",
    "0",
    "--out",
    splitPath,
  ]);
  return splitPath;
}

export function cleanupFixture(fixture: Fixture): void {
  fs.rmSync(fixture.root, { recursive: true, force: true });
}
