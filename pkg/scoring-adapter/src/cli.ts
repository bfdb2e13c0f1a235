#!/usr/bin/env node
/**
 * CLI: init-config, score, dump, train. Every command accepts --config with
 * a JSON config file; flags override file values.
 */

import * as fs from "node:fs";
import * as path from "node:path";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";
import * as tf from "@tensorflow/tfjs";

import { TrainConfig, defaultConfig, parseConfig, serializeConfig, tinyConfig, validateConfig } from "./config";
import { atomicWrite, parseLabelFile } from "./formats";
import { loadImage, preprocess } from "./images";
import { loadBackbone, saveWeightsToDisk } from "./model";
import { dumpFeatures, dumpHeadWeights } from "./dump";
import { listImageFiles, scoreImagesToFile } from "./score";
import { fineTune } from "./train";

interface CommonArgs {
  config?: string;
  backbone?: string;
  weights?: string;
  seed?: number;
}

function resolveConfig(args: CommonArgs): TrainConfig {
  let config = args.config ? parseConfig(fs.readFileSync(args.config, "utf-8")) : defaultConfig();
  if (args.backbone === "tiny") config = { ...tinyConfig(), ...pickOverrides(config) };
  else if (args.backbone) config.backbone = args.backbone as TrainConfig["backbone"];
  if (args.weights) config.weightsPath = args.weights;
  if (args.seed !== undefined) config.seed = args.seed;
  validateConfig(config);
  return config;
}

function pickOverrides(config: TrainConfig): Partial<TrainConfig> {
  // keep explicitly configured training hyperparameters when switching profile
  const defaults = defaultConfig();
  const out: Partial<TrainConfig> = {};
  for (const key of Object.keys(config) as (keyof TrainConfig)[]) {
    if (key === "backbone" || key === "inputSize") continue;
    if (config[key] !== defaults[key]) (out as Record<string, unknown>)[key] = config[key];
  }
  return out;
}

async function main(): Promise<void> {
  await yargs(hideBin(process.argv))
    .scriptName("catheter-score")
    .command(
      "init-config",
      "write a config file with the reference defaults",
      (y) =>
        y
          .option("out", { type: "string", demandOption: true })
          .option("tiny", { type: "boolean", default: false }),
      (args) => {
        const config = args.tiny ? tinyConfig() : defaultConfig();
        atomicWrite(args.out, serializeConfig(config));
        console.log(`wrote ${args.out}`);
      }
    )
    .command(
      "score",
      "score every image in a directory into a score table",
      (y) =>
        y
          .option("images", { type: "string", demandOption: true })
          .option("out", { type: "string", demandOption: true })
          .option("config", { type: "string" })
          .option("backbone", { type: "string" })
          .option("weights", { type: "string" })
          .option("seed", { type: "number" }),
      async (args) => {
        const config = resolveConfig(args);
        const backbone = await loadBackbone(config);
        const rows = scoreImagesToFile(backbone, args.images, args.out);
        console.log(`wrote ${args.out} (${rows.length} rows x ${config.headOutputs} labels)`);
      }
    )
    .command(
      "dump",
      "dump one image's feature map and the model's head weights",
      (y) =>
        y
          .option("image", { type: "string", demandOption: true })
          .option("out-features", { type: "string", demandOption: true })
          .option("out-weights", { type: "string", demandOption: true })
          .option("config", { type: "string" })
          .option("backbone", { type: "string" })
          .option("weights", { type: "string" })
          .option("seed", { type: "number" }),
      async (args) => {
        const config = resolveConfig(args);
        const backbone = await loadBackbone(config);
        const info = dumpFeatures(backbone, args.image, args["out-features"] as string);
        dumpHeadWeights(backbone, args["out-weights"] as string);
        console.log(
          `wrote ${args["out-features"]} (${info.channels}x${info.height}x${info.width}) ` +
            `and ${args["out-weights"]} (${config.headOutputs}x${info.channels})`
        );
      }
    )
    .command(
      "train",
      "fine-tune on a labeled image directory and save the weights",
      (y) =>
        y
          .option("images", { type: "string", demandOption: true })
          .option("labels", { type: "string", demandOption: true })
          .option("out", { type: "string", demandOption: true })
          .option("val-fraction", { type: "number", default: 0.1 })
          .option("config", { type: "string" })
          .option("backbone", { type: "string" })
          .option("weights", { type: "string" })
          .option("seed", { type: "number" })
          .option("epochs", { type: "number" }),
      async (args) => {
        const config = resolveConfig(args);
        if (args.epochs !== undefined) config.epochs = args.epochs;
        const backbone = await loadBackbone(config);
        const { labelNames, rows } = parseLabelFile(args.labels);
        if (labelNames.join(",") !== config.labelNames.join(",")) {
          throw new Error(
            `label file columns (${labelNames}) do not match config labels (${config.labelNames})`
          );
        }
        const available = new Set(listImageFiles(args.images));
        const usable = rows.filter((r) => available.has(r.imageId));
        if (usable.length < 2) throw new Error("need at least 2 labeled images present on disk");
        const tensors = usable.map((r) =>
          preprocess(loadImage(path.join(args.images, r.imageId)), config.inputSize)
        );
        const x = tf.stack(tensors) as tf.Tensor4D;
        tensors.forEach((t) => t.dispose());
        const y = tf.tensor2d(usable.map((r) => r.labels));
        const nVal = Math.max(1, Math.round(usable.length * (args["val-fraction"] as number)));
        const nTrain = usable.length - nVal;
        const [trainX, valX] = tf.split(x, [nTrain, nVal]);
        const [trainY, valY] = tf.split(y, [nTrain, nVal]);
        const result = await fineTune(
          backbone,
          trainX as tf.Tensor4D,
          trainY as tf.Tensor2D,
          valX as tf.Tensor4D,
          valY as tf.Tensor2D,
          config
        );
        saveWeightsToDisk(backbone, args.out);
        console.log(
          `trained ${result.history.length} epochs; best epoch ${result.bestEpoch} ` +
            `(val loss ${result.bestValLoss.toFixed(4)}); weights in ${args.out}`
        );
      }
    )
    .demandCommand(1)
    .strict()
    .fail((msg, err) => {
      console.error(JSON.stringify({ error: err ? err.constructor.name : "UsageError", message: msg ?? String(err) }));
      process.exit(err ? 1 : 2);
    })
    .parseAsync();
}

main().catch((err) => {
  console.error(JSON.stringify({ error: err.constructor.name, message: err.message }));
  process.exit(1);
});
