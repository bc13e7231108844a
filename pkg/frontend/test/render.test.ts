import { inflateSync } from "node:zlib";
import { readFileSync } from "node:fs";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { buildSweepFigure, buildVerifyFigure } from "../src/figure.js";
import { Canvas, encodePng, renderPng } from "../src/raster.js";
import { parseSweepCsv, parseVerifyCsv } from "../src/schema.js";

const FIXTURES = join(__dirname, "fixtures");
const sweepRows = parseSweepCsv(
  readFileSync(join(FIXTURES, "sweep_two_sigmas.csv"), "utf8"),
);
const verifyRows = parseVerifyCsv(
  readFileSync(join(FIXTURES, "verify_tail.csv"), "utf8"),
);

const PNG_MAGIC = Buffer.from([0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a]);

function ihdr(png: Buffer): { width: number; height: number } {
  expect(png.subarray(0, 8).equals(PNG_MAGIC)).toBe(true);
  expect(png.subarray(12, 16).toString("ascii")).toBe("IHDR");
  return { width: png.readUInt32BE(16), height: png.readUInt32BE(20) };
}

describe("encodePng", () => {
  it("produces a decodable image of the right size", () => {
    const canvas = new Canvas(10, 7);
    canvas.set(3, 2, [255, 0, 0]);
    const png = encodePng(canvas);
    expect(ihdr(png)).toEqual({ width: 10, height: 7 });
    // IDAT payload inflates to height * (1 + width*4) filtered bytes
    const idatLen = png.readUInt32BE(33);
    expect(png.subarray(37, 41).toString("ascii")).toBe("IDAT");
    const raw = inflateSync(png.subarray(41, 41 + idatLen));
    expect(raw.length).toBe(7 * (1 + 10 * 4));
    // the painted pixel survives the round trip (row 2, col 3, filter byte offset)
    const offset = 2 * (1 + 10 * 4) + 1 + 3 * 4;
    expect([raw[offset], raw[offset + 1], raw[offset + 2]]).toEqual([255, 0, 0]);
  });
});

describe("renderPng", () => {
  it("renders the sweep figure deterministically", () => {
    const figure = buildSweepFigure(sweepRows, "sigma");
    const a = renderPng(figure);
    const b = renderPng(figure);
    expect(a.equals(b)).toBe(true);
    expect(ihdr(a)).toEqual({ width: 720, height: 480 });
  });

  it("renders bar charts", () => {
    const png = renderPng(buildVerifyFigure(verifyRows));
    expect(ihdr(png)).toEqual({ width: 720, height: 480 });
    expect(png.length).toBeGreaterThan(1000);
  });

  it("draws something other than the white background", () => {
    const figure = buildSweepFigure(sweepRows, "sigma");
    const png = renderPng(figure);
    const idatLen = png.readUInt32BE(33);
    const raw = inflateSync(png.subarray(41, 41 + idatLen));
    let colored = 0;
    for (let i = 1; i < raw.length; i += 4) {
      if (raw[i] !== 255 || raw[i + 1] !== 255 || raw[i + 2] !== 255) colored++;
    }
    expect(colored).toBeGreaterThan(2000);
  });
});
