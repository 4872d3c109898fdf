/** Command line entry: train the QoR regressor or run the classifier check. */

import * as fs from "node:fs";
import * as path from "node:path";

import { loadDataset, loadSplit, StepFilter } from "./dataset.js";
import { CONFIGS, QorModel } from "./model.js";
import { evaluate, scatterCsv, trainRegression } from "./train.js";
import {
  GraphClassifier,
  accuracy,
  dumpEmbeddings,
  trainClassifier,
} from "./classify.js";
import { makeClassDataset } from "./synthetic.js";

interface Args {
  positional: string[];
  options: Map<string, string>;
}

function parseArgs(argv: string[]): Args {
  const positional: string[] = [];
  const options = new Map<string, string>();
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    if (arg.startsWith("--")) {
      const value = argv[i + 1];
      if (value === undefined) throw new Error(`missing value for ${arg}`);
      options.set(arg.slice(2), value);
      i++;
    } else {
      positional.push(arg);
    }
  }
  return { positional, options };
}

function intOption(args: Args, name: string, fallback: number): number {
  const raw = args.options.get(name);
  if (raw === undefined) return fallback;
  const value = Number(raw);
  if (!Number.isFinite(value)) throw new Error(`bad --${name}: ${raw}`);
  return Math.trunc(value);
}

function floatOption(args: Args, name: string, fallback: number): number {
  const raw = args.options.get(name);
  if (raw === undefined) return fallback;
  const value = Number(raw);
  if (!Number.isFinite(value)) throw new Error(`bad --${name}: ${raw}`);
  return value;
}

async function cmdTrain(args: Args): Promise<void> {
  const datasetDir = args.options.get("dataset");
  const splitPath = args.options.get("split");
  if (!datasetDir || !splitPath) {
    throw new Error("train needs --dataset DIR and --split FILE");
  }
  const netName = args.options.get("net") ?? "Net1";
  const config = CONFIGS[netName];
  if (!config) {
    throw new Error(`unknown --net ${netName}; one of ${Object.keys(CONFIGS)}`);
  }
  const steps = (args.options.get("steps") ?? "final") as StepFilter;
  const epochs = intOption(args, "epochs", 80);
  const seed = intOption(args, "seed", 1);

  const split = loadSplit(splitPath);
  const { train, test } = loadDataset(datasetDir, split, { steps });
  if (train.length === 0) throw new Error("split produced no training samples");
  console.log(
    `${config.name}: ${train.length} train / ${test.length} test samples`
  );

  const model = new QorModel(config, train[0].recipeVector.length, seed);
  const curve = await trainRegression(model, train, {
    epochs,
    batchSize: intOption(args, "batch", 64),
    learningRate: floatOption(args, "lr", 0.001),
    seed,
    onEpoch: (epoch, loss) =>
      console.log(`epoch ${epoch + 1}/${epochs} loss ${loss.toFixed(6)}`),
  });

  const trainEval = await evaluate(model, train);
  const metrics: Record<string, unknown> = {
    net: config.name,
    epochs,
    seed,
    train_samples: train.length,
    test_samples: test.length,
    final_train_loss: curve[curve.length - 1],
    train_mse: trainEval.mse,
  };
  if (test.length > 0) {
    const testEval = await evaluate(model, test);
    metrics.test_mse = testEval.mse;
    const scatter = args.options.get("scatter");
    if (scatter) {
      fs.writeFileSync(scatter, scatterCsv(testEval.rows));
      console.log(`wrote ${scatter}`);
    }
  }
  const metricsJson = JSON.stringify(metrics, null, 2) + "\n";
  const metricsPath = args.options.get("metrics");
  if (metricsPath) {
    fs.mkdirSync(path.dirname(path.resolve(metricsPath)), { recursive: true });
    fs.writeFileSync(metricsPath, metricsJson);
    console.log(`wrote ${metricsPath}`);
  } else {
    process.stdout.write(metricsJson);
  }
  model.dispose();
}

async function cmdClassify(args: Args): Promise<void> {
  const perFamily = intOption(args, "per-family", 64);
  const epochs = intOption(args, "epochs", 30);
  const seed = intOption(args, "seed", 1);
  const samples = makeClassDataset(perFamily, seed);
  const classCount = new Set(samples.map((s) => s.classIndex)).size;
  const model = new GraphClassifier([64, 64], classCount, seed);
  await trainClassifier(model, samples, {
    epochs,
    seed,
    onEpoch: (epoch, loss) =>
      console.log(`epoch ${epoch + 1}/${epochs} loss ${loss.toFixed(6)}`),
  });
  const acc = await accuracy(model, samples);
  console.log(`train accuracy ${(acc * 100).toFixed(1)}% over ${samples.length}`);
  const embPath = args.options.get("embeddings");
  if (embPath) {
    fs.writeFileSync(embPath, await dumpEmbeddings(model, samples));
    console.log(`wrote ${embPath}`);
  }
  model.dispose();
}

const USAGE = `usage:
  qor train --dataset DIR --split FILE [--net Net1|Net2|Net3] [--steps final|initial|all]
            [--epochs N] [--batch N] [--lr F] [--seed N] [--scatter CSV] [--metrics JSON]
  qor classify [--per-family N] [--epochs N] [--seed N] [--embeddings TSV]
`;

export async function main(argv: string[]): Promise<number> {
  try {
    const args = parseArgs(argv);
    const command = args.positional[0];
    if (command === "train") await cmdTrain(args);
    else if (command === "classify") await cmdClassify(args);
    else {
      process.stderr.write(USAGE);
      return command === undefined || command === "help" ? 0 : 2;
    }
    return 0;
  } catch (err) {
    process.stderr.write(`error: ${(err as Error).message}\n`);
    return 2;
  }
}

const entry = process.argv[1] ? path.resolve(process.argv[1]) : "";
if (entry.endsWith("cli.js")) {
  main(process.argv.slice(2)).then((code) => {
    process.exitCode = code;
  });
}
