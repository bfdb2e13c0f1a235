import { describe, expect, it } from "vitest";

import { decodePng, encodePng, RasterImage } from "../src/png";
import { mulberry32 } from "../src/images";

function randomImage(width: number, height: number, channels: 1 | 3, seed: number): RasterImage {
  const rng = mulberry32(seed);
  const data = new Uint8Array(width * height * channels);
  for (let i = 0; i < data.length; i++) data[i] = Math.floor(rng() * 256);
  return { width, height, channels, data };
}

describe("png codec", () => {
  it("round-trips grayscale", () => {
    const img = randomImage(17, 9, 1, 1);
    const back = decodePng(encodePng(img));
    expect(back.width).toBe(17);
    expect(back.height).toBe(9);
    expect(back.channels).toBe(1);
    expect(Buffer.from(back.data).equals(Buffer.from(img.data))).toBe(true);
  });

  it("round-trips RGB", () => {
    const img = randomImage(8, 12, 3, 2);
    const back = decodePng(encodePng(img));
    expect(back.channels).toBe(3);
    expect(Buffer.from(back.data).equals(Buffer.from(img.data))).toBe(true);
  });

  it("encoding is deterministic", () => {
    const img = randomImage(20, 20, 1, 3);
    expect(encodePng(img).equals(encodePng(img))).toBe(true);
  });

  it("rejects non-PNG input", () => {
    expect(() => decodePng(Buffer.from("definitely not a png"))).toThrow(/not a PNG/);
  });

  it("rejects bad pixel buffer sizes", () => {
    expect(() =>
      encodePng({ width: 2, height: 2, channels: 1, data: new Uint8Array(3) })
    ).toThrow(/pixel buffer/);
  });
});
