import { describe, expect, it } from "vitest";

import { defaultConfig, parseConfig, serializeConfig, tinyConfig, validateConfig } from "../src/config";

describe("defaults", () => {
  it("match the reference recipe exactly", () => {
    const c = defaultConfig();
    expect(c.backbone).toBe("resnet50-imagenet");
    expect(c.headOutputs).toBe(4);
    expect(c.labelNames).toEqual(["NGT", "ETT", "UAC", "UVC"]);
    expect(c.inputSize).toBe(224);
    expect(c.augment).toBe("horizontal-flip");
    expect(c.optimizer).toBe("sgd-momentum");
    expect(c.momentum).toBe(0.9);
    expect(c.learningRate).toBe(0.001);
    expect(c.lrHalvingEpochs).toBe(20);
    expect(c.batchSize).toBe(16);
    expect(c.epochs).toBe(50);
    expect(c.loss).toBe("per-label-cross-entropy");
    expect(c.earlyStop).toBe("min-validation-loss");
  });
});

describe("serialization", () => {
  it("round-trips the default config", () => {
    const c = defaultConfig();
    expect(parseConfig(serializeConfig(c))).toEqual(c);
  });

  it("round-trips a customized config byte for byte", () => {
    const c = { ...tinyConfig(), seed: 42, weightsPath: "weights/run1" };
    const text = serializeConfig(c);
    expect(serializeConfig(parseConfig(text))).toBe(text);
  });

  it("fills omitted keys with the defaults", () => {
    const c = parseConfig('{"batchSize": 8}');
    expect(c.batchSize).toBe(8);
    expect(c.momentum).toBe(0.9);
  });
});

describe("validation", () => {
  it("rejects mismatched label names", () => {
    const c = { ...defaultConfig(), labelNames: ["A"] };
    expect(() => validateConfig(c)).toThrow(/label names/);
  });

  it("rejects out-of-range momentum", () => {
    const c = { ...defaultConfig(), momentum: 1.5 };
    expect(() => validateConfig(c)).toThrow(/momentum/);
  });
});
