/** Graph classification head used to sanity-check embedding separability. */

import * as tf from "@tensorflow/tfjs";

import { FEATURE_WIDTH, Graph, normalizedAdjacency } from "./graph.js";
import { mulberry32, seededShuffle } from "./train.js";

export interface ClassSample {
  graph: Graph;
  features: number[][];
  classIndex: number;
  name: string;
}

let classifierInstances = 0;

export class GraphClassifier {
  readonly gcnDims: [number, number];
  readonly classCount: number;
  /** unique prefix: the tfjs engine requires globally distinct variable names */
  private readonly scope = `cls${classifierInstances++}`;
  private readonly weights = new Map<string, tf.Variable>();

  constructor(gcnDims: [number, number], classCount: number, seed = 1) {
    if (classCount < 2) throw new Error("need at least 2 classes");
    this.gcnDims = gcnDims;
    this.classCount = classCount;
    let s = seed;
    const add = (name: string, shape: number[], zero = false) => {
      const init = zero
        ? tf.zeros(shape)
        : (tf.initializers.glorotUniform({ seed: s++ }).apply(shape) as tf.Tensor);
      this.weights.set(name, tf.variable(init, true, `${this.scope}/${name}`));
    };
    const [l1, l2] = gcnDims;
    add("gcn1/w", [FEATURE_WIDTH, l1]);
    add("gcn1/b", [l1], true);
    add("gcn2/w", [l1, l2]);
    add("gcn2/b", [l2], true);
    add("fc/w", [2 * l2, classCount]);
    add("fc/b", [classCount], true);
  }

  private w(name: string): tf.Variable {
    const v = this.weights.get(name);
    if (!v) throw new Error(`no weight ${name}`);
    return v;
  }

  variables(): tf.Variable[] {
    return [...this.weights.values()];
  }

  dispose(): void {
    for (const v of this.weights.values()) v.dispose();
    this.weights.clear();
  }

  embedding(sample: ClassSample): tf.Tensor1D {
    return tf.tidy(() => {
      const x = tf.tensor2d(sample.features, [
        sample.features.length,
        FEATURE_WIDTH,
      ]);
      const adj = tf.tensor2d(normalizedAdjacency(sample.graph));
      const h1 = tf.relu(
        adj.matMul(x).matMul(this.w("gcn1/w")).add(this.w("gcn1/b"))
      );
      const h2 = tf.relu(
        adj.matMul(h1).matMul(this.w("gcn2/w")).add(this.w("gcn2/b"))
      );
      return tf.concat([h2.max(0), h2.mean(0)]) as tf.Tensor1D;
    });
  }

  logits(sample: ClassSample): tf.Tensor1D {
    return tf.tidy(
      () =>
        this.embedding(sample)
          .reshape([1, 2 * this.gcnDims[1]])
          .matMul(this.w("fc/w"))
          .add(this.w("fc/b"))
          .reshape([this.classCount]) as tf.Tensor1D
    );
  }

  logitsBatch(samples: ClassSample[]): tf.Tensor2D {
    return tf.tidy(
      () => tf.stack(samples.map((s) => this.logits(s))) as tf.Tensor2D
    );
  }
}

export interface ClassifyOptions {
  epochs: number;
  batchSize?: number;
  learningRate?: number;
  weightDecay?: number;
  seed?: number;
  onEpoch?: (epoch: number, loss: number) => void;
}

/** Cross-entropy training with L2 weight decay on the weight matrices. */
export async function trainClassifier(
  model: GraphClassifier,
  samples: ClassSample[],
  options: ClassifyOptions
): Promise<number[]> {
  if (samples.length === 0) throw new Error("empty training set");
  const classes = new Set(samples.map((s) => s.classIndex));
  if (classes.size < 2) throw new Error("need samples from at least 2 classes");
  const batchSize = options.batchSize ?? 64;
  const decay = options.weightDecay ?? 0.01;
  const optimizer = tf.train.adam(options.learningRate ?? 0.001);
  const rand = mulberry32(options.seed ?? 1);
  const decayed = model
    .variables()
    .filter((v) => v.name.endsWith("/w"));
  const curve: number[] = [];

  for (let epoch = 0; epoch < options.epochs; epoch++) {
    const order = seededShuffle(samples, rand);
    let lossSum = 0;
    let batches = 0;
    for (let start = 0; start < order.length; start += batchSize) {
      const batch = order.slice(start, start + batchSize);
      const labels = tf.oneHot(
        tf.tensor1d(batch.map((s) => s.classIndex), "int32"),
        model.classCount
      );
      const cost = optimizer.minimize(
        () => {
          const logits = model.logitsBatch(batch);
          const ce = tf.losses.softmaxCrossEntropy(labels, logits) as tf.Scalar;
          const l2 = decayed
            .map((v) => v.square().sum())
            .reduce((a, b) => a.add(b)) as tf.Scalar;
          return ce.add(l2.mul(decay)) as tf.Scalar;
        },
        true,
        model.variables()
      ) as tf.Scalar;
      lossSum += (await cost.data())[0];
      batches += 1;
      cost.dispose();
      labels.dispose();
    }
    const loss = lossSum / batches;
    curve.push(loss);
    options.onEpoch?.(epoch, loss);
  }
  optimizer.dispose();
  return curve;
}

export async function accuracy(
  model: GraphClassifier,
  samples: ClassSample[]
): Promise<number> {
  if (samples.length === 0) throw new Error("empty evaluation set");
  const logits = model.logitsBatch(samples);
  const picks = await logits.argMax(1).data();
  logits.dispose();
  let hits = 0;
  samples.forEach((s, i) => {
    if (picks[i] === s.classIndex) hits += 1;
  });
  return hits / samples.length;
}

/** Embeddings as TSV: name, class index, then one column per dimension. */
export async function dumpEmbeddings(
  model: GraphClassifier,
  samples: ClassSample[]
): Promise<string> {
  const lines: string[] = [];
  for (const s of samples) {
    const emb = model.embedding(s);
    const values = await emb.data();
    emb.dispose();
    lines.push([s.name, s.classIndex, ...values].join("\t"));
  }
  return lines.join("\n") + "\n";
}
