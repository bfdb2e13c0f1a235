/**
 * Feature and weight export for activation-map rendering: the penultimate
 * (pre-pooling) feature map of one image as a C x H x W tensor dump, and
 * the K x C head weight matrix (one dump per model).
 */

import * as tf from "@tensorflow/tfjs";
import * as path from "node:path";

import { writeTensorFile } from "./formats";
import { loadImage, preprocess } from "./images";
import { Backbone } from "./model";

export function dumpFeatures(backbone: Backbone, imagePath: string, outPath: string): {
  channels: number;
  height: number;
  width: number;
  scores: number[];
} {
  const image = loadImage(imagePath);
  const tensor = preprocess(image, backbone.config.inputSize);
  const batch = tensor.expandDims(0) as tf.Tensor4D;
  tensor.dispose();
  const [features, probs] = backbone.predictWithFeatures(batch);
  batch.dispose();
  const chw = tf.tidy(() => tf.transpose(features.squeeze([0]), [2, 0, 1]));
  features.dispose();
  const [channels, height, width] = chw.shape as [number, number, number];
  writeTensorFile(outPath, chw.dataSync() as Float32Array, {
    dtype: "f32",
    shape: [channels, height, width],
    layout: "row-major",
    byte_order: "little",
    source_image_id: path.basename(imagePath),
    source_image_size: [image.height, image.width],
  });
  chw.dispose();
  const scores = Array.from(probs.dataSync());
  probs.dispose();
  return { channels, height, width, scores };
}

export function dumpHeadWeights(backbone: Backbone, outPath: string): void {
  writeTensorFile(outPath, backbone.headWeights(), {
    dtype: "f32",
    shape: [backbone.config.headOutputs, backbone.featureChannels],
    layout: "row-major",
    byte_order: "little",
    labels: backbone.config.labelNames,
  });
}
