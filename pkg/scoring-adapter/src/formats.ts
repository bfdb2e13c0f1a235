/**
 * Writers for the evaluation toolkit's wire formats: the score table CSV
 * and the binary tensor dump (one-line JSON header + little-endian float32
 * payload). Header serialization matches the toolkit's canonical form byte
 * for byte, including key order and separators, so a parse/re-serialize
 * round trip through either side is the identity.
 */

import * as fs from "node:fs";
import * as path from "node:path";

export interface TensorHeader {
  dtype: "f32";
  shape: number[];
  layout: "row-major";
  byte_order: "little";
  labels?: string[];
  source_image_id?: string;
  source_image_size?: [number, number];
}

const HEADER_KEY_ORDER = [
  "dtype",
  "shape",
  "layout",
  "byte_order",
  "labels",
  "source_image_id",
  "source_image_size",
] as const;

function jsonValue(value: unknown): string {
  if (Array.isArray(value)) {
    return "[" + value.map(jsonValue).join(", ") + "]";
  }
  return JSON.stringify(value);
}

/** `{"dtype": "f32", "shape": [C, H, W], ...}` with a trailing newline. */
export function canonicalHeader(header: TensorHeader): string {
  const parts: string[] = [];
  for (const key of HEADER_KEY_ORDER) {
    const value = (header as unknown as Record<string, unknown>)[key];
    if (value !== undefined) parts.push(`${JSON.stringify(key)}: ${jsonValue(value)}`);
  }
  return "{" + parts.join(", ") + "}\n";
}

export function atomicWrite(filePath: string, data: Buffer | string): void {
  const dir = path.dirname(filePath);
  fs.mkdirSync(dir, { recursive: true });
  const tmp = path.join(dir, `.${path.basename(filePath)}.${process.pid}.tmp`);
  fs.writeFileSync(tmp, data);
  fs.renameSync(tmp, filePath);
}

export function writeTensorFile(
  filePath: string,
  data: Float32Array,
  header: TensorHeader
): void {
  const count = header.shape.reduce((a, b) => a * b, 1);
  if (data.length !== count) {
    throw new Error(`tensor has ${data.length} values, header declares ${count}`);
  }
  const payload = Buffer.alloc(4 * data.length);
  for (let i = 0; i < data.length; i++) payload.writeFloatLE(data[i], 4 * i);
  atomicWrite(filePath, Buffer.concat([Buffer.from(canonicalHeader(header), "utf-8"), payload]));
}

export function readTensorFile(filePath: string): { data: Float32Array; header: TensorHeader } {
  const raw = fs.readFileSync(filePath);
  const nl = raw.indexOf(0x0a);
  if (nl < 0) throw new Error(`${filePath}: missing newline-terminated header`);
  const header = JSON.parse(raw.toString("utf-8", 0, nl)) as TensorHeader;
  const count = header.shape.reduce((a, b) => a * b, 1);
  const body = raw.subarray(nl + 1);
  if (body.length !== 4 * count) {
    throw new Error(`${filePath}: body holds ${body.length} bytes, header declares ${4 * count}`);
  }
  const data = new Float32Array(count);
  for (let i = 0; i < count; i++) data[i] = body.readFloatLE(4 * i);
  return { data, header };
}

export interface ScoreRow {
  imageId: string;
  scores: number[];
}

export function writeScoreFile(filePath: string, labelNames: string[], rows: ScoreRow[]): void {
  const lines = ["image_id," + labelNames.join(",")];
  for (const row of rows) {
    if (row.scores.length !== labelNames.length) {
      throw new Error(
        `row ${row.imageId} has ${row.scores.length} scores for ${labelNames.length} labels`
      );
    }
    for (const s of row.scores) {
      if (!(s >= 0 && s <= 1)) throw new Error(`score ${s} for ${row.imageId} outside [0, 1]`);
    }
    lines.push(row.imageId + "," + row.scores.map((s) => s.toString()).join(","));
  }
  atomicWrite(filePath, lines.join("\n") + "\n");
}

export function writeLabelFile(
  filePath: string,
  labelNames: string[],
  rows: { imageId: string; labels: number[] }[]
): void {
  const lines = ["image_id," + labelNames.join(",")];
  for (const row of rows) {
    lines.push(row.imageId + "," + row.labels.map((v) => (v ? "1" : "0")).join(","));
  }
  atomicWrite(filePath, lines.join("\n") + "\n");
}

export function parseLabelFile(
  filePath: string
): { labelNames: string[]; rows: { imageId: string; labels: number[] }[] } {
  const text = fs.readFileSync(filePath, "utf-8");
  const lines = text.split("\n").filter((l) => l !== "");
  if (lines.length === 0) throw new Error(`${filePath}: empty label file`);
  const header = lines[0].split(",");
  if (header[0] !== "image_id") throw new Error(`${filePath}: header must start with image_id`);
  const labelNames = header.slice(1);
  const rows = lines.slice(1).map((line, i) => {
    const cells = line.split(",");
    if (cells.length !== header.length) {
      throw new Error(`${filePath}:${i + 2}: expected ${header.length} cells`);
    }
    const labels = cells.slice(1).map((c) => {
      if (c !== "0" && c !== "1") throw new Error(`${filePath}:${i + 2}: label cell ${c}`);
      return Number(c);
    });
    return { imageId: cells[0], labels };
  });
  return { labelNames, rows };
}
