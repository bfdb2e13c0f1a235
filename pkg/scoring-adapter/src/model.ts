/**
 * Convolutional backbone with a per-label sigmoid head.
 *
 * "resnet50-imagenet" builds the standard ResNet-50 graph (conv stem plus
 * bottleneck stages 3-4-6-3) with a replacement fully connected layer of K
 * output nodes, one probability per label. Pretrained weights are loaded
 * from `weightsPath` when supplied; otherwise layers are initialized from
 * seeded distributions so that repeated runs are bit-identical. "tiny" is a
 * reduced-depth profile of the same shape for fast tests.
 *
 * The model exposes two outputs: the penultimate (pre-pooling) feature map
 * and the per-label probabilities, so feature dumps and scores always come
 * from a single consistent forward pass.
 */

import * as tf from "@tensorflow/tfjs";
import * as fs from "node:fs";
import * as path from "node:path";

import { BackboneId, TrainConfig } from "./config";

const HEAD_LAYER = "label_head";
const FEATURE_LAYER = "feature_map";

interface StageSpec {
  blocks: number;
  width: number;
  stride: number;
}

const PROFILES: Record<BackboneId, { stemFilters: number; stemKernel: number; stages: StageSpec[] }> = {
  "resnet50-imagenet": {
    stemFilters: 64,
    stemKernel: 7,
    stages: [
      { blocks: 3, width: 64, stride: 1 },
      { blocks: 4, width: 128, stride: 2 },
      { blocks: 6, width: 256, stride: 2 },
      { blocks: 3, width: 512, stride: 2 },
    ],
  },
  tiny: {
    stemFilters: 8,
    stemKernel: 3,
    stages: [
      { blocks: 1, width: 8, stride: 1 },
      { blocks: 1, width: 16, stride: 2 },
    ],
  },
};

export class Backbone {
  readonly model: tf.LayersModel;
  readonly config: TrainConfig;
  readonly featureChannels: number;
  readonly featureHeight: number;
  readonly featureWidth: number;

  constructor(model: tf.LayersModel, config: TrainConfig) {
    this.model = model;
    this.config = config;
    const featureShape = model.outputs[0].shape; // [null, H, W, C]
    this.featureHeight = featureShape[1] as number;
    this.featureWidth = featureShape[2] as number;
    this.featureChannels = featureShape[3] as number;
  }

  /** Probabilities for a preprocessed NHWC batch. */
  predictScores(batch: tf.Tensor4D): tf.Tensor2D {
    const [, probs] = this.model.predict(batch) as tf.Tensor[];
    return probs as tf.Tensor2D;
  }

  /** (features NHWC, probabilities) for a preprocessed NHWC batch. */
  predictWithFeatures(batch: tf.Tensor4D): [tf.Tensor4D, tf.Tensor2D] {
    const [features, probs] = this.model.predict(batch) as tf.Tensor[];
    return [features as tf.Tensor4D, probs as tf.Tensor2D];
  }

  /** Head weight matrix transposed to K x C (one row per label). */
  headWeights(): Float32Array {
    const layer = this.model.getLayer(HEAD_LAYER);
    const kernel = layer.getWeights()[0] as tf.Tensor2D; // C x K
    const transposed = tf.transpose(kernel);
    const data = transposed.dataSync() as Float32Array;
    transposed.dispose();
    return Float32Array.from(data);
  }
}

function bottleneck(
  x: tf.SymbolicTensor,
  width: number,
  stride: number,
  project: boolean,
  nextSeed: () => number
): tf.SymbolicTensor {
  const conv = (input: tf.SymbolicTensor, filters: number, kernel: number, s: number) =>
    tf.layers
      .conv2d({
        filters,
        kernelSize: kernel,
        strides: s,
        padding: "same",
        useBias: false,
        kernelInitializer: tf.initializers.heNormal({ seed: nextSeed() }),
      })
      .apply(input) as tf.SymbolicTensor;
  const bn = (input: tf.SymbolicTensor) =>
    tf.layers.batchNormalization({}).apply(input) as tf.SymbolicTensor;
  const relu = (input: tf.SymbolicTensor) =>
    tf.layers.reLU().apply(input) as tf.SymbolicTensor;

  let y = relu(bn(conv(x, width, 1, 1)));
  y = relu(bn(conv(y, width, 3, stride))); // stride lives on the 3x3 conv
  y = bn(conv(y, width * 4, 1, 1));
  const shortcut = project ? bn(conv(x, width * 4, 1, stride)) : x;
  const merged = tf.layers.add().apply([y, shortcut]) as tf.SymbolicTensor;
  return relu(merged);
}

export function buildBackbone(config: TrainConfig): Backbone {
  const profile = PROFILES[config.backbone];
  if (!profile) throw new Error(`unknown backbone ${config.backbone}`);
  let seed = config.seed;
  const nextSeed = () => seed++;

  const input = tf.input({
    shape: [config.inputSize, config.inputSize, 3],
    name: "image",
  });
  let x = tf.layers
    .conv2d({
      filters: profile.stemFilters,
      kernelSize: profile.stemKernel,
      strides: 2,
      padding: "same",
      useBias: false,
      kernelInitializer: tf.initializers.heNormal({ seed: nextSeed() }),
    })
    .apply(input) as tf.SymbolicTensor;
  x = tf.layers.batchNormalization({}).apply(x) as tf.SymbolicTensor;
  x = tf.layers.reLU().apply(x) as tf.SymbolicTensor;
  x = tf.layers
    .maxPooling2d({ poolSize: 3, strides: 2, padding: "same" })
    .apply(x) as tf.SymbolicTensor;

  for (const stage of profile.stages) {
    for (let b = 0; b < stage.blocks; b++) {
      x = bottleneck(x, stage.width, b === 0 ? stage.stride : 1, b === 0, nextSeed);
    }
  }

  const features = tf.layers
    .activation({ activation: "linear", name: FEATURE_LAYER })
    .apply(x) as tf.SymbolicTensor;
  const pooled = tf.layers.globalAveragePooling2d({}).apply(features) as tf.SymbolicTensor;
  const probs = tf.layers
    .dense({
      units: config.headOutputs,
      activation: "sigmoid",
      name: HEAD_LAYER,
      kernelInitializer: tf.initializers.glorotUniform({ seed: nextSeed() }),
    })
    .apply(pooled) as tf.SymbolicTensor;

  const model = tf.model({ inputs: input, outputs: [features, probs] });
  return new Backbone(model, config);
}

export async function loadBackbone(config: TrainConfig): Promise<Backbone> {
  const backbone = buildBackbone(config);
  if (config.weightsPath) {
    const weights = readWeightsFromDisk(config.weightsPath);
    backbone.model.setWeights(weights);
    weights.forEach((w) => w.dispose());
  }
  return backbone;
}

/**
 * Weight archive on disk: a `weights.json` manifest (names, shapes) next to
 * a `weights.bin` of little-endian float32 values in manifest order.
 */
export function saveWeightsToDisk(backbone: Backbone, dir: string): void {
  fs.mkdirSync(dir, { recursive: true });
  const weights = backbone.model.getWeights();
  const names = backbone.model.weights.map((w) => w.name);
  const manifest: { name: string; shape: number[] }[] = [];
  const chunks: Buffer[] = [];
  weights.forEach((tensor, i) => {
    manifest.push({ name: names[i], shape: tensor.shape.slice() });
    const data = tensor.dataSync() as Float32Array;
    const buf = Buffer.alloc(4 * data.length);
    for (let j = 0; j < data.length; j++) buf.writeFloatLE(data[j], 4 * j);
    chunks.push(buf);
  });
  fs.writeFileSync(path.join(dir, "weights.json"), JSON.stringify(manifest, null, 2));
  fs.writeFileSync(path.join(dir, "weights.bin"), Buffer.concat(chunks));
}

export function readWeightsFromDisk(dir: string): tf.Tensor[] {
  const manifest = JSON.parse(
    fs.readFileSync(path.join(dir, "weights.json"), "utf-8")
  ) as { name: string; shape: number[] }[];
  const blob = fs.readFileSync(path.join(dir, "weights.bin"));
  const tensors: tf.Tensor[] = [];
  let offset = 0;
  for (const entry of manifest) {
    const count = entry.shape.reduce((a, b) => a * b, 1);
    const data = new Float32Array(count);
    for (let i = 0; i < count; i++) data[i] = blob.readFloatLE(offset + 4 * i);
    offset += 4 * count;
    tensors.push(tf.tensor(data, entry.shape));
  }
  if (offset !== blob.length) {
    throw new Error(`weights.bin holds ${blob.length} bytes, manifest expects ${offset}`);
  }
  return tensors;
}
