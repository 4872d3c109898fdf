export {
  FEATURE_WIDTH,
  NODE_TYPE_AND,
  NODE_TYPE_CONST0,
  NODE_TYPE_PI,
  NODE_TYPE_PO,
  featureMatrix,
  normalizedAdjacency,
  permuteGraph,
} from "./graph.js";
export type { Graph } from "./graph.js";
export { parseGraphml } from "./graphml.js";
export {
  checkLabelConsistency,
  loadDataset,
  loadManifest,
  loadSample,
  loadSplit,
  selectRows,
} from "./dataset.js";
export type {
  GraphSample,
  ManifestRow,
  SampleLabel,
  SplitManifest,
  StepFilter,
} from "./dataset.js";
export {
  CONFIGS,
  NET1,
  NET2,
  NET3,
  QorModel,
  convOutputWidth,
  preFcWidth,
  validateConfig,
} from "./model.js";
export type { ModelConfig } from "./model.js";
export {
  evaluate,
  mulberry32,
  scatterCsv,
  seededShuffle,
  trainRegression,
} from "./train.js";
export type { EvalResult, PredictionRow, TrainOptions } from "./train.js";
export {
  GraphClassifier,
  accuracy,
  dumpEmbeddings,
  trainClassifier,
} from "./classify.js";
export type { ClassSample, ClassifyOptions } from "./classify.js";
export {
  FAMILY_NAMES,
  chainGraph,
  makeClassDataset,
  starGraph,
  treeGraph,
} from "./synthetic.js";
