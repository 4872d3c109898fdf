/** The QoR regression model: two-layer GCN + 1D-conv recipe encoding. */

import * as tf from "@tensorflow/tfjs";

import { FEATURE_WIDTH, normalizedAdjacency } from "./graph.js";
import { GraphSample } from "./dataset.js";

export interface ModelConfig {
  name: string;
  /** (L1, L2) graph-convolution widths */
  gcnDims: [number, number];
  /** output width of the recipe linear layer */
  recipeLinearDim: number;
  convKernels: number[];
  convStride: number;
  /** fully-connected widths, input width first, scalar output last */
  fcArchitecture: number[];
  /** dropout ratio per hidden FC layer */
  dropout: number[];
}

export const NET1: ModelConfig = {
  name: "Net1",
  gcnDims: [128, 128],
  recipeLinearDim: 60,
  convKernels: [6, 9, 12],
  convStride: 3,
  fcArchitecture: [310, 128, 128, 1],
  dropout: [0, 0],
};

export const NET2: ModelConfig = {
  name: "Net2",
  gcnDims: [64, 64],
  recipeLinearDim: 60,
  convKernels: [12, 15, 18, 21],
  convStride: 3,
  fcArchitecture: [190, 512, 512, 512, 1],
  dropout: [0, 0, 0],
};

export const NET3: ModelConfig = {
  name: "Net3",
  gcnDims: [64, 64],
  recipeLinearDim: 60,
  convKernels: [21, 24, 27, 30],
  convStride: 3,
  fcArchitecture: [178, 512, 512, 512, 1],
  dropout: [0.2, 0.2, 0.2],
};

export const CONFIGS: Record<string, ModelConfig> = {
  Net1: NET1,
  Net2: NET2,
  Net3: NET3,
};

export function convOutputWidth(config: ModelConfig, kernel: number): number {
  return Math.floor((config.recipeLinearDim - kernel) / config.convStride) + 1;
}

/** Width of the concatenated (graph ++ recipe) embedding entering the FC stack. */
export function preFcWidth(config: ModelConfig): number {
  const recipe = config.convKernels
    .map((k) => convOutputWidth(config, k))
    .reduce((a, b) => a + b, 0);
  return 2 * config.gcnDims[1] + recipe;
}

export function validateConfig(config: ModelConfig): void {
  const expected = preFcWidth(config);
  if (config.fcArchitecture[0] !== expected) {
    throw new Error(
      `${config.name}: fc input ${config.fcArchitecture[0]} != ` +
        `2*L2 + conv widths = ${expected}`
    );
  }
  if (config.fcArchitecture[config.fcArchitecture.length - 1] !== 1) {
    throw new Error(`${config.name}: final FC width must be 1`);
  }
  if (config.dropout.length !== config.fcArchitecture.length - 2) {
    throw new Error(`${config.name}: one dropout ratio per hidden FC layer`);
  }
}

let modelInstances = 0;

export class QorModel {
  readonly config: ModelConfig;
  readonly recipeLength: number;
  readonly seed: number;
  /** unique prefix: the tfjs engine requires globally distinct variable names */
  private readonly scope = `qor${modelInstances++}`;
  private readonly weights = new Map<string, tf.Variable>();
  private seedCounter: number;
  private dropoutCounter = 0;

  constructor(config: ModelConfig, recipeLength: number, seed = 1) {
    validateConfig(config);
    this.config = config;
    this.recipeLength = recipeLength;
    this.seed = seed;
    this.seedCounter = seed;

    const [l1, l2] = config.gcnDims;
    this.addDense("gcn1", FEATURE_WIDTH, l1);
    this.addDense("gcn2", l1, l2);
    this.addDense("recipe", recipeLength, config.recipeLinearDim);
    config.convKernels.forEach((k, i) => {
      this.addWeight(`conv${i}/w`, [k, 1, 1]);
      this.addWeight(`conv${i}/b`, [1], true);
    });
    const fc = config.fcArchitecture;
    for (let i = 0; i + 1 < fc.length; i++) {
      this.addDense(`fc${i}`, fc[i], fc[i + 1]);
    }
  }

  private addWeight(name: string, shape: number[], zero = false): void {
    const init = zero
      ? tf.zeros(shape)
      : (tf.initializers
          .glorotUniform({ seed: this.seedCounter++ })
          .apply(shape) as tf.Tensor);
    this.weights.set(name, tf.variable(init, true, `${this.scope}/${name}`));
  }

  private addDense(name: string, inputDim: number, units: number): void {
    this.addWeight(`${name}/w`, [inputDim, units]);
    this.addWeight(`${name}/b`, [units], true);
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

  /** Permutation-invariant graph embedding: concat(max, mean) readout. */
  graphEmbedding(sample: GraphSample): tf.Tensor1D {
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

  /** Recipe path: linear map to 60, then one 1D convolution per kernel. */
  recipeEmbedding(recipeVector: number[]): tf.Tensor1D {
    if (recipeVector.length !== this.recipeLength) {
      throw new Error(
        `recipe length ${recipeVector.length} != ${this.recipeLength}`
      );
    }
    return tf.tidy(() => {
      const r = tf.tensor2d([recipeVector]);
      const lin = r.matMul(this.w("recipe/w")).add(this.w("recipe/b"));
      const seq = lin.reshape([1, this.config.recipeLinearDim, 1]) as tf.Tensor3D;
      const outs = this.config.convKernels.map((_, i) =>
        tf
          .conv1d(
            seq,
            this.w(`conv${i}/w`) as unknown as tf.Tensor3D,
            this.config.convStride,
            "valid"
          )
          .add(this.w(`conv${i}/b`))
          .reshape([-1])
      );
      return tf.concat(outs) as tf.Tensor1D;
    });
  }

  /** Scalar QoR prediction; dropout is active only while training. */
  predict(sample: GraphSample, training = false): tf.Scalar {
    return tf.tidy(() => {
      const joint = tf.concat([
        this.graphEmbedding(sample),
        this.recipeEmbedding(sample.recipeVector),
      ]);
      let x = joint.reshape([1, this.config.fcArchitecture[0]]);
      const layerCount = this.config.fcArchitecture.length - 1;
      for (let i = 0; i < layerCount; i++) {
        x = x.matMul(this.w(`fc${i}/w`)).add(this.w(`fc${i}/b`));
        if (i + 1 < layerCount) {
          x = tf.relu(x);
          const rate = this.config.dropout[i];
          if (training && rate > 0) {
            x = tf.dropout(x, rate, undefined, this.seed + this.dropoutCounter++);
          }
        }
      }
      return x.reshape([]) as tf.Scalar;
    });
  }

  predictBatch(samples: GraphSample[], training = false): tf.Tensor1D {
    return tf.tidy(
      () => tf.stack(samples.map((s) => this.predict(s, training))) as tf.Tensor1D
    );
  }
}
