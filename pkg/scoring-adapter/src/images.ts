/**
 * Image loading and preprocessing: decode PNG, expand grayscale to RGB,
 * bilinear-resize to the model's input size, and normalize with the
 * ImageNet channel statistics the pretrained backbone expects.
 */

import * as tf from "@tensorflow/tfjs";
import * as fs from "node:fs";

import { decodePng, RasterImage } from "./png";

const IMAGENET_MEAN = [0.485, 0.456, 0.406];
const IMAGENET_STD = [0.229, 0.224, 0.225];

export function loadImage(filePath: string): RasterImage {
  return decodePng(fs.readFileSync(filePath));
}

/** HWC float tensor in [0, 1], grayscale expanded to three channels. */
export function toTensor(image: RasterImage): tf.Tensor3D {
  const { width, height, channels, data } = image;
  const rgb = new Float32Array(width * height * 3);
  for (let i = 0; i < width * height; i++) {
    if (channels === 1) {
      const v = data[i] / 255;
      rgb[i * 3] = v;
      rgb[i * 3 + 1] = v;
      rgb[i * 3 + 2] = v;
    } else {
      rgb[i * 3] = data[i * 3] / 255;
      rgb[i * 3 + 1] = data[i * 3 + 1] / 255;
      rgb[i * 3 + 2] = data[i * 3 + 2] / 255;
    }
  }
  return tf.tensor3d(rgb, [height, width, 3]);
}

export function preprocess(image: RasterImage, inputSize: number): tf.Tensor3D {
  return tf.tidy(() => {
    let x = toTensor(image);
    if (x.shape[0] !== inputSize || x.shape[1] !== inputSize) {
      x = tf.image.resizeBilinear(x, [inputSize, inputSize]);
    }
    const mean = tf.tensor1d(IMAGENET_MEAN);
    const std = tf.tensor1d(IMAGENET_STD);
    return x.sub(mean).div(std);
  });
}

export function horizontalFlip(batch: tf.Tensor4D): tf.Tensor4D {
  return tf.tidy(() => tf.reverse(batch, 2)) as tf.Tensor4D;
}

/** Deterministic PRNG for seeded augmentation decisions. */
export function mulberry32(seed: number): () => number {
  let state = seed >>> 0;
  return () => {
    state = (state + 0x6d2b79f5) >>> 0;
    let z = state;
    z = Math.imul(z ^ (z >>> 15), z | 1);
    z ^= z + Math.imul(z ^ (z >>> 7), z | 61);
    return ((z ^ (z >>> 14)) >>> 0) / 4294967296;
  };
}
