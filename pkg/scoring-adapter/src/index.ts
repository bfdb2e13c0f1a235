export {
  BackboneId,
  TrainConfig,
  defaultConfig,
  parseConfig,
  serializeConfig,
  tinyConfig,
  validateConfig,
} from "./config";
export { RasterImage, decodePng, encodePng } from "./png";
export {
  ScoreRow,
  TensorHeader,
  canonicalHeader,
  parseLabelFile,
  readTensorFile,
  writeLabelFile,
  writeScoreFile,
  writeTensorFile,
} from "./formats";
export { horizontalFlip, loadImage, mulberry32, preprocess, toTensor } from "./images";
export { Backbone, buildBackbone, loadBackbone, readWeightsFromDisk, saveWeightsToDisk } from "./model";
export { listImageFiles, scoreImages, scoreImagesToFile } from "./score";
export { dumpFeatures, dumpHeadWeights } from "./dump";
export { EpochRecord, FineTuneResult, fineTune } from "./train";
