// Figure model shared by the SVG and PNG renderers: series of points on
// linear or log10 axes, or paired bars (empirical vs bound).

import { SweepRow, VerifyRow } from "./schema.js";

export interface Point {
  x: number;
  y: number;
}

export interface Series {
  label: string;
  points: Point[];
}

export interface BarPair {
  label: string;
  empirical: number;
  bound: number;
}

export interface Figure {
  title: string;
  xLabel: string;
  yLabel: string;
  xLog: boolean;
  yLog: boolean;
  series: Series[];
  bars: BarPair[] | null;
}

export type SweepAxis = "sigma" | "n" | "k" | "d";

export const SWEEP_AXES: SweepAxis[] = ["sigma", "n", "k", "d"];

export function buildSweepFigure(rows: SweepRow[], axis: SweepAxis): Figure {
  const groupKeys: SweepAxis[] = SWEEP_AXES.filter((a) => a !== axis);
  const groups = new Map<string, Point[]>();
  for (const row of rows) {
    const label = groupKeys.map((key) => `${key}=${row[key]}`).join(" ");
    if (!groups.has(label)) groups.set(label, []);
    groups.get(label)!.push({ x: row[axis], y: row.iters_mean });
  }
  const series = [...groups.entries()].map(([label, points]) => ({
    label,
    points: points.slice().sort((a, b) => a.x - b.x),
  }));
  const log = axis === "sigma";
  return {
    title: `mean iterations vs ${axis}`,
    xLabel: axis,
    yLabel: "iterations (mean)",
    xLog: log,
    yLog: log,
    series,
    bars: null,
  };
}

export function buildVerifyFigure(rows: VerifyRow[]): Figure {
  return {
    title: "empirical vs bound per check",
    xLabel: "check",
    yLabel: "probability",
    xLog: false,
    yLog: false,
    series: [],
    bars: rows.map((row) => ({
      label: row.lemma,
      empirical: row.empirical,
      bound: row.bound,
    })),
  };
}

export interface Scale {
  lo: number;
  hi: number;
  log: boolean;
  ticks: number[];
  // maps a data value to [0, 1]
  unit(value: number): number;
}

function linearTicks(lo: number, hi: number): number[] {
  if (lo === hi) return [lo];
  const span = hi - lo;
  const rawStep = span / 5;
  const mag = Math.pow(10, Math.floor(Math.log10(rawStep)));
  const candidates = [1, 2, 5, 10].map((m) => m * mag);
  const step = candidates.find((c) => span / c <= 6) ?? candidates[3];
  const ticks: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + step * 1e-9; v += step) {
    ticks.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return ticks;
}

function logTicks(lo: number, hi: number): number[] {
  const first = Math.floor(Math.log10(lo));
  const last = Math.ceil(Math.log10(hi));
  const ticks: number[] = [];
  const mantissas = last - first <= 1 ? [1, 2, 5] : [1];
  for (let exp = first; exp <= last; exp++) {
    for (const m of mantissas) {
      const v = m * Math.pow(10, exp);
      if (v >= lo / 1.0001 && v <= hi * 1.0001) ticks.push(v);
    }
  }
  return ticks.length > 0 ? ticks : [lo, hi];
}

export function makeScale(values: number[], log: boolean): Scale {
  const finite = values.filter((v) => Number.isFinite(v) && (!log || v > 0));
  if (finite.length === 0) {
    throw new Error(log ? "log axis needs positive finite values" : "axis needs finite values");
  }
  let lo = Math.min(...finite);
  let hi = Math.max(...finite);
  if (lo === hi) {
    lo = log ? lo / 2 : lo - 1;
    hi = log ? hi * 2 : hi + 1;
  } else if (!log) {
    const pad = (hi - lo) * 0.05;
    lo -= pad;
    hi += pad;
  } else {
    lo /= 1.2;
    hi *= 1.2;
  }
  const ticks = log ? logTicks(lo, hi) : linearTicks(lo, hi);
  return {
    lo,
    hi,
    log,
    ticks,
    unit(value: number): number {
      if (log) {
        return (Math.log10(value) - Math.log10(lo)) / (Math.log10(hi) - Math.log10(lo));
      }
      return (value - lo) / (hi - lo);
    },
  };
}

export function formatTick(value: number): string {
  if (value === 0) return "0";
  const abs = Math.abs(value);
  if (abs >= 1e4 || abs < 1e-3) {
    return value.toExponential(0).replace("e+", "e");
  }
  const text = value.toPrecision(4);
  return text.includes(".") ? text.replace(/\.?0+$/, "") : text;
}

export const SERIES_COLORS = [
  "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];
