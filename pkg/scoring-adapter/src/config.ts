/**
 * Training/inference configuration. The defaults are the original recipe:
 * an ImageNet-pretrained ResNet-50 backbone with a 4-node sigmoid head,
 * 224x224 inputs with horizontal-flip augmentation, SGD with momentum 0.9,
 * learning rate 0.001 halved after each set of 20 epochs, batch size 16,
 * 50 epochs, per-label cross entropy, early stop at minimum validation loss.
 */

export type BackboneId = "resnet50-imagenet" | "tiny";

export interface TrainConfig {
  backbone: BackboneId;
  headOutputs: number;
  labelNames: string[];
  inputSize: number;
  augment: "horizontal-flip" | "none";
  optimizer: "sgd-momentum";
  momentum: number;
  learningRate: number;
  lrHalvingEpochs: number;
  batchSize: number;
  epochs: number;
  loss: "per-label-cross-entropy";
  earlyStop: "min-validation-loss";
  /** Initializer seed used when no pretrained weights file is supplied. */
  seed: number;
  /** Optional path to a tfjs-format model.json with trained weights. */
  weightsPath?: string;
}

export function defaultConfig(): TrainConfig {
  return {
    backbone: "resnet50-imagenet",
    headOutputs: 4,
    labelNames: ["NGT", "ETT", "UAC", "UVC"],
    inputSize: 224,
    augment: "horizontal-flip",
    optimizer: "sgd-momentum",
    momentum: 0.9,
    learningRate: 0.001,
    lrHalvingEpochs: 20,
    batchSize: 16,
    epochs: 50,
    loss: "per-label-cross-entropy",
    earlyStop: "min-validation-loss",
    seed: 1,
  };
}

/** Reduced-depth profile for fast tests and smoke runs. */
export function tinyConfig(): TrainConfig {
  return {
    ...defaultConfig(),
    backbone: "tiny",
    inputSize: 32,
  };
}

const KEY_ORDER: (keyof TrainConfig)[] = [
  "backbone",
  "headOutputs",
  "labelNames",
  "inputSize",
  "augment",
  "optimizer",
  "momentum",
  "learningRate",
  "lrHalvingEpochs",
  "batchSize",
  "epochs",
  "loss",
  "earlyStop",
  "seed",
  "weightsPath",
];

export function serializeConfig(config: TrainConfig): string {
  const ordered: Record<string, unknown> = {};
  for (const key of KEY_ORDER) {
    if (config[key] !== undefined) ordered[key] = config[key];
  }
  return JSON.stringify(ordered, null, 2) + "\n";
}

export function parseConfig(text: string): TrainConfig {
  const raw = JSON.parse(text) as Partial<TrainConfig>;
  const config = { ...defaultConfig(), ...raw };
  validateConfig(config);
  return config;
}

export function validateConfig(config: TrainConfig): void {
  if (config.headOutputs < 1) throw new Error(`headOutputs must be >= 1, got ${config.headOutputs}`);
  if (config.labelNames.length !== config.headOutputs) {
    throw new Error(
      `${config.labelNames.length} label names for ${config.headOutputs} head outputs`
    );
  }
  if (new Set(config.labelNames).size !== config.labelNames.length) {
    throw new Error("label names must be unique");
  }
  if (config.inputSize < 8) throw new Error(`inputSize ${config.inputSize} too small`);
  if (!(config.momentum >= 0 && config.momentum < 1)) {
    throw new Error(`momentum ${config.momentum} outside [0, 1)`);
  }
  if (config.learningRate <= 0) throw new Error("learningRate must be positive");
  if (config.batchSize < 1 || config.epochs < 1 || config.lrHalvingEpochs < 1) {
    throw new Error("batchSize, epochs, and lrHalvingEpochs must be >= 1");
  }
}
