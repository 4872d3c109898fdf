/** Regression training loop and evaluation helpers. */

import * as tf from "@tensorflow/tfjs";

import { GraphSample } from "./dataset.js";
import { QorModel } from "./model.js";

/** Small deterministic PRNG so shuffles are reproducible across runs. */
export function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) | 0;
    let t = Math.imul(a ^ (a >>> 15), 1 | a);
    t = (t + Math.imul(t ^ (t >>> 7), 61 | t)) ^ t;
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function seededShuffle<T>(items: T[], rand: () => number): T[] {
  const out = [...items];
  for (let i = out.length - 1; i > 0; i--) {
    const j = Math.floor(rand() * (i + 1));
    [out[i], out[j]] = [out[j], out[i]];
  }
  return out;
}

export interface TrainOptions {
  epochs: number;
  batchSize?: number;
  /** initial learning rate; decays by `lrDecay` each epoch */
  learningRate?: number;
  lrDecay?: number;
  /** linear learning-rate ramp over the first epochs */
  warmupEpochs?: number;
  /** Adam first-moment decay; lower values damp full-batch oscillation */
  adamBeta1?: number;
  seed?: number;
  /** stop early once the epoch loss drops below this value */
  stopBelow?: number;
  /** called after each epoch with the mean training loss */
  onEpoch?: (epoch: number, loss: number) => void;
}

/** Train with Adam on mean squared error; returns the per-epoch loss curve. */
export async function trainRegression(
  model: QorModel,
  samples: GraphSample[],
  options: TrainOptions
): Promise<number[]> {
  if (samples.length === 0) throw new Error("empty training set");
  const batchSize = options.batchSize ?? 64;
  const lr0 = options.learningRate ?? 0.001;
  const decay = options.lrDecay ?? 1;
  const optimizer = tf.train.adam(lr0, options.adamBeta1 ?? 0.9);
  const rand = mulberry32(options.seed ?? 1);
  const curve: number[] = [];

  const warmup = options.warmupEpochs ?? 0;

  for (let epoch = 0; epoch < options.epochs; epoch++) {
    const ramp = warmup > 0 ? Math.min(1, (epoch + 1) / warmup) : 1;
    // the optimizer keeps its moment estimates; only the step size changes
    (optimizer as unknown as { learningRate: number }).learningRate =
      lr0 * ramp * Math.pow(decay, Math.max(0, epoch - warmup));
    const order = seededShuffle(samples, rand);
    let lossSum = 0;
    let batches = 0;
    for (let start = 0; start < order.length; start += batchSize) {
      const batch = order.slice(start, start + batchSize);
      const targets = tf.tensor1d(batch.map((s) => s.target));
      const cost = optimizer.minimize(
        () => {
          const pred = model.predictBatch(batch, true);
          return tf.losses.meanSquaredError(targets, pred) as tf.Scalar;
        },
        true,
        model.variables()
      ) as tf.Scalar;
      lossSum += (await cost.data())[0];
      batches += 1;
      cost.dispose();
      targets.dispose();
    }
    const loss = lossSum / batches;
    curve.push(loss);
    options.onEpoch?.(epoch, loss);
    if (options.stopBelow !== undefined && loss < options.stopBelow) break;
  }
  optimizer.dispose();
  return curve;
}

export interface PredictionRow {
  ip: string;
  recipeId: number;
  predicted: number;
  actual: number;
}

export interface EvalResult {
  mse: number;
  rows: PredictionRow[];
}

export async function evaluate(
  model: QorModel,
  samples: GraphSample[]
): Promise<EvalResult> {
  if (samples.length === 0) throw new Error("empty evaluation set");
  const pred = model.predictBatch(samples, false);
  const values = await pred.data();
  pred.dispose();
  let sq = 0;
  const rows = samples.map((s, i) => {
    const err = values[i] - s.target;
    sq += err * err;
    return {
      ip: s.label.ip_name,
      recipeId: s.label.recipe_id,
      predicted: values[i],
      actual: s.target,
    };
  });
  return { mse: sq / samples.length, rows };
}

/** Rows as a predicted-vs-actual CSV for scatter plotting. */
export function scatterCsv(rows: PredictionRow[]): string {
  const lines = ["ip,recipe_id,predicted,actual"];
  for (const r of rows) {
    lines.push(`${r.ip},${r.recipeId},${r.predicted},${r.actual}`);
  }
  return lines.join("\n") + "\n";
}
