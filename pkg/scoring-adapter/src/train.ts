/**
 * Optional fine-tuning with the reference recipe: SGD with momentum 0.9,
 * the learning rate halved after each set of `lrHalvingEpochs` epochs,
 * per-label (sigmoid) cross entropy, seeded horizontal-flip augmentation,
 * and early stopping that keeps the weights from the epoch with the lowest
 * validation loss.
 */

import * as tf from "@tensorflow/tfjs";

import { TrainConfig } from "./config";
import { horizontalFlip, mulberry32 } from "./images";
import { Backbone } from "./model";

export interface EpochRecord {
  epoch: number;
  learningRate: number;
  trainLoss: number;
  valLoss: number;
}

export interface FineTuneResult {
  history: EpochRecord[];
  bestEpoch: number;
  bestValLoss: number;
}

function binaryCrossEntropy(target: tf.Tensor2D, probs: tf.Tensor2D): tf.Scalar {
  return tf.tidy(() => {
    const eps = 1e-7;
    const clipped = probs.clipByValue(eps, 1 - eps);
    const losses = target
      .mul(clipped.log())
      .add(tf.onesLike(target).sub(target).mul(tf.onesLike(clipped).sub(clipped).log()))
      .neg();
    return losses.mean() as tf.Scalar;
  });
}

export async function fineTune(
  backbone: Backbone,
  trainX: tf.Tensor4D,
  trainY: tf.Tensor2D,
  valX: tf.Tensor4D,
  valY: tf.Tensor2D,
  config: TrainConfig = backbone.config
): Promise<FineTuneResult> {
  const model = backbone.model;
  const rng = mulberry32(config.seed);
  const history: EpochRecord[] = [];
  let bestEpoch = -1;
  let bestValLoss = Infinity;
  let bestWeights: tf.Tensor[] | null = null;
  const n = trainX.shape[0];

  for (let epoch = 0; epoch < config.epochs; epoch++) {
    const learningRate =
      config.learningRate * Math.pow(0.5, Math.floor(epoch / config.lrHalvingEpochs));
    const optimizer = tf.train.momentum(learningRate, config.momentum);

    // seeded shuffle, then seeded per-batch flip augmentation
    const order = Array.from({ length: n }, (_, i) => i);
    for (let i = n - 1; i > 0; i--) {
      const j = Math.floor(rng() * (i + 1));
      [order[i], order[j]] = [order[j], order[i]];
    }
    let epochLoss = 0;
    let batches = 0;
    for (let start = 0; start < n; start += config.batchSize) {
      const idx = order.slice(start, start + config.batchSize);
      const loss = tf.tidy(() => {
        let bx = tf.gather(trainX, idx) as tf.Tensor4D;
        const by = tf.gather(trainY, idx) as tf.Tensor2D;
        if (config.augment === "horizontal-flip" && rng() < 0.5) {
          bx = horizontalFlip(bx);
        }
        const value = optimizer.minimize(
          () => {
            const [, probs] = model.apply(bx, { training: true }) as tf.Tensor[];
            return binaryCrossEntropy(by, probs as tf.Tensor2D);
          },
          true
        ) as tf.Scalar;
        return value.dataSync()[0];
      });
      epochLoss += loss;
      batches += 1;
    }
    optimizer.dispose();

    const valLoss = tf.tidy(() => {
      const [, probs] = model.predict(valX) as tf.Tensor[];
      return binaryCrossEntropy(valY, probs as tf.Tensor2D).dataSync()[0];
    });
    history.push({
      epoch,
      learningRate,
      trainLoss: epochLoss / Math.max(batches, 1),
      valLoss,
    });
    if (valLoss < bestValLoss) {
      bestValLoss = valLoss;
      bestEpoch = epoch;
      if (bestWeights) bestWeights.forEach((w) => w.dispose());
      bestWeights = model.getWeights().map((w) => w.clone());
    }
  }
  if (bestWeights) {
    model.setWeights(bestWeights);
    bestWeights.forEach((w) => w.dispose());
  }
  return { history, bestEpoch, bestValLoss };
}
