/**
 * Batch scoring: every readable image in a directory becomes one row of a
 * score table, K probabilities in [0, 1]. Output rows are sorted by image
 * id, so results do not depend on directory listing order, and inference
 * runs in deterministic mode (no augmentation, fixed weights).
 */

import * as tf from "@tensorflow/tfjs";
import * as fs from "node:fs";
import * as path from "node:path";

import { TrainConfig } from "./config";
import { ScoreRow, writeScoreFile } from "./formats";
import { loadImage, preprocess } from "./images";
import { Backbone } from "./model";

export function listImageFiles(dir: string): string[] {
  return fs
    .readdirSync(dir)
    .filter((name) => name.toLowerCase().endsWith(".png"))
    .sort();
}

export function scoreImages(backbone: Backbone, dir: string): ScoreRow[] {
  const files = listImageFiles(dir);
  if (files.length === 0) throw new Error(`no .png images found in ${dir}`);
  const config: TrainConfig = backbone.config;
  const rows: ScoreRow[] = [];
  for (let start = 0; start < files.length; start += config.batchSize) {
    const batchFiles = files.slice(start, start + config.batchSize);
    const tensors = batchFiles.map((name) =>
      preprocess(loadImage(path.join(dir, name)), config.inputSize)
    );
    const batch = tf.stack(tensors) as tf.Tensor4D;
    tensors.forEach((t) => t.dispose());
    const probs = backbone.predictScores(batch);
    const values = probs.arraySync() as number[][];
    batch.dispose();
    probs.dispose();
    batchFiles.forEach((name, i) => {
      rows.push({ imageId: name, scores: values[i] });
    });
  }
  return rows;
}

export function scoreImagesToFile(backbone: Backbone, dir: string, outPath: string): ScoreRow[] {
  const rows = scoreImages(backbone, dir);
  writeScoreFile(outPath, backbone.config.labelNames, rows);
  return rows;
}
