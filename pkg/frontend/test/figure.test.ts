import { readFileSync } from "node:fs";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { buildSweepFigure, buildVerifyFigure, formatTick, makeScale } from "../src/figure.js";
import { parseSweepCsv, parseVerifyCsv } from "../src/schema.js";
import { renderSvg } from "../src/svg.js";

const FIXTURES = join(__dirname, "fixtures");
const sweepRows = parseSweepCsv(
  readFileSync(join(FIXTURES, "sweep_two_sigmas.csv"), "utf8"),
);
const gridRows = parseSweepCsv(readFileSync(join(FIXTURES, "sweep_grid.csv"), "utf8"));
const verifyRows = parseVerifyCsv(
  readFileSync(join(FIXTURES, "verify_tail.csv"), "utf8"),
);

describe("buildSweepFigure", () => {
  it("puts two sigma cells into one series of two points", () => {
    const figure = buildSweepFigure(sweepRows, "sigma");
    expect(figure.series).toHaveLength(1);
    expect(figure.series[0].points).toHaveLength(2);
    expect(figure.xLog).toBe(true);
    expect(figure.yLog).toBe(true);
  });

  it("groups by the remaining parameters on the n axis", () => {
    const figure = buildSweepFigure(gridRows, "n");
    // 2 sigmas x 1 k x 1 d = 2 series, each with 2 n values
    expect(figure.series).toHaveLength(2);
    for (const series of figure.series) {
      expect(series.points).toHaveLength(2);
      expect(series.points[0].x).toBeLessThan(series.points[1].x);
    }
    expect(figure.xLog).toBe(false);
  });

  it("uses log-log only for the sigma axis", () => {
    expect(buildSweepFigure(gridRows, "sigma").xLog).toBe(true);
    expect(buildSweepFigure(gridRows, "k").xLog).toBe(false);
  });
});

describe("buildVerifyFigure", () => {
  it("emits one bar pair per check", () => {
    const figure = buildVerifyFigure(verifyRows);
    expect(figure.bars).toHaveLength(2);
    expect(figure.bars![0]).toMatchObject({ label: "tail" });
    expect(figure.bars![0].bound).toBeGreaterThan(figure.bars![0].empirical);
  });
});

describe("makeScale", () => {
  it("log ticks cover the data decades", () => {
    const scale = makeScale([0.01, 0.25], true);
    expect(scale.ticks).toContain(0.01);
    expect(scale.ticks).toContain(0.1);
    expect(scale.unit(0.01)).toBeGreaterThanOrEqual(0);
    expect(scale.unit(0.25)).toBeLessThanOrEqual(1);
  });

  it("linear ticks are evenly spaced", () => {
    const scale = makeScale([0, 10], false);
    const gaps = scale.ticks.slice(1).map((t, i) => t - scale.ticks[i]);
    for (const gap of gaps) expect(gap).toBeCloseTo(gaps[0], 9);
  });

  it("degenerate ranges still render", () => {
    const scale = makeScale([5, 5], false);
    expect(scale.lo).toBeLessThan(5);
    expect(scale.hi).toBeGreaterThan(5);
  });

  it("rejects non-positive values on log axes", () => {
    expect(() => makeScale([0, -1], true)).toThrow();
  });
});

describe("formatTick", () => {
  it("keeps short decimals and compacts extremes", () => {
    expect(formatTick(0.25)).toBe("0.25");
    expect(formatTick(100)).toBe("100");
    expect(formatTick(1e-5)).toBe("1e-5");
    expect(formatTick(0)).toBe("0");
  });
});

describe("renderSvg", () => {
  it("draws one circle per data point", () => {
    const svg = renderSvg(buildSweepFigure(sweepRows, "sigma"));
    expect((svg.match(/<circle/g) ?? []).length).toBe(2);
    expect(svg).toContain("mean iterations vs sigma");
    expect(svg.startsWith("<svg")).toBe(true);
  });

  it("is deterministic without a timestamp", () => {
    const figure = buildSweepFigure(sweepRows, "sigma");
    expect(renderSvg(figure)).toBe(renderSvg(figure));
  });

  it("embeds a timestamp only when asked", () => {
    const figure = buildSweepFigure(sweepRows, "sigma");
    expect(renderSvg(figure)).not.toContain("generated");
    expect(renderSvg(figure, "2026-01-01T00:00:00Z")).toContain(
      "generated 2026-01-01T00:00:00Z",
    );
  });

  it("renders bar charts for verify rows", () => {
    const svg = renderSvg(buildVerifyFigure(verifyRows));
    expect((svg.match(/<rect/g) ?? []).length).toBeGreaterThanOrEqual(5);
    expect(svg).toContain("empirical");
    expect(svg).toContain("bound");
  });
});
