import { readFileSync } from "node:fs";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import {
  SchemaError,
  detectKind,
  parseSweepCsv,
  parseVerifyCsv,
} from "../src/schema.js";

const FIXTURES = join(__dirname, "fixtures");
const sweepText = readFileSync(join(FIXTURES, "sweep_two_sigmas.csv"), "utf8");
const verifyText = readFileSync(join(FIXTURES, "verify_tail.csv"), "utf8");

describe("detectKind", () => {
  it("recognizes the sweep schema", () => {
    expect(detectKind(sweepText)).toBe("sweep");
  });

  it("recognizes the verify schema", () => {
    expect(detectKind(verifyText)).toBe("verify");
  });

  it("rejects empty files", () => {
    expect(() => detectKind("")).toThrow(SchemaError);
    expect(() => detectKind("\n\n")).toThrow(/empty/);
  });

  it("lists missing columns on mismatch", () => {
    const broken = sweepText.replace("iters_mean,iters_median,", "iters_mean,");
    expect(() => detectKind(broken)).toThrow(/iters_median/);
  });
});

describe("parseSweepCsv", () => {
  it("parses every documented column as a number", () => {
    const rows = parseSweepCsv(sweepText);
    expect(rows).toHaveLength(2);
    expect(rows[0].n).toBe(40);
    expect(rows[0].sigma).toBeCloseTo(0.05, 12);
    expect(rows[1].sigma).toBeCloseTo(0.25, 12);
    expect(rows[0].iters_mean).toBeGreaterThan(0);
    expect(rows[0].trials).toBe(5);
  });

  it("accepts nan cells", () => {
    const withNan = sweepText.replace(/,0\.2653[^,]*,/, ",nan,");
    const rows = parseSweepCsv(withNan);
    expect(Number.isNaN(rows[0].min_delta_mean)).toBe(true);
  });

  it("rejects a file with a header but no rows", () => {
    const headerOnly = sweepText.split("\n")[0] + "\n";
    expect(() => parseSweepCsv(headerOnly)).toThrow(/no data rows/);
  });

  it("rejects garbage cells", () => {
    const garbage = sweepText.replace("40,4,2", "forty,4,2");
    expect(() => parseSweepCsv(garbage)).toThrow(/non-numeric/);
  });

  it("lists every missing column", () => {
    expect(() => parseSweepCsv("a,b,c\n1,2,3\n")).toThrow(
      /missing columns: n, k, d, sigma/,
    );
  });
});

describe("parseVerifyCsv", () => {
  it("parses lemma rows", () => {
    const rows = parseVerifyCsv(verifyText);
    expect(rows).toHaveLength(2);
    expect(rows[0].lemma).toBe("tail");
    expect(rows[0].verdict).toBe("pass");
    expect(rows[0].empirical).toBeLessThan(rows[0].bound);
    expect(rows[1].lemma).toBe("spreaded-prob");
  });
});
