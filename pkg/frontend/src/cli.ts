#!/usr/bin/env node
// plot_sweep --in results.csv --x sigma --out fig.svg|fig.png
//
// Renders a kmeanslab sweep CSV (mean iterations vs the chosen axis,
// log-log when the axis is sigma) or a verify results file (bar pairs
// empirical/bound per check).  Never mutates the input; output is
// deterministic unless --timestamp is given.

import { readFileSync, writeFileSync } from "node:fs";

import { SWEEP_AXES, SweepAxis, buildSweepFigure, buildVerifyFigure } from "./figure.js";
import { renderPng } from "./raster.js";
import { SchemaError, detectKind, parseSweepCsv, parseVerifyCsv } from "./schema.js";
import { renderSvg } from "./svg.js";

export interface CliOptions {
  input: string;
  axis: SweepAxis;
  output: string;
  timestamp: boolean;
}

export class UsageError extends Error {}

export function parseArgs(argv: string[]): CliOptions {
  const options: Partial<CliOptions> = { axis: "sigma", timestamp: false };
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    const next = () => {
      i += 1;
      if (i >= argv.length) throw new UsageError(`${arg} needs a value`);
      return argv[i];
    };
    if (arg === "--in") options.input = next();
    else if (arg === "--x") {
      const axis = next();
      if (!SWEEP_AXES.includes(axis as SweepAxis)) {
        throw new UsageError(`--x must be one of ${SWEEP_AXES.join(", ")}`);
      }
      options.axis = axis as SweepAxis;
    } else if (arg === "--out") options.output = next();
    else if (arg === "--timestamp") options.timestamp = true;
    else throw new UsageError(`unknown argument ${arg}`);
  }
  if (!options.input || !options.output) {
    throw new UsageError("usage: plot_sweep --in results.csv --x sigma --out fig.svg");
  }
  return options as CliOptions;
}

export function renderFile(options: CliOptions): void {
  const text = readFileSync(options.input, "utf8");
  const kind = detectKind(text);
  const figure =
    kind === "sweep"
      ? buildSweepFigure(parseSweepCsv(text), options.axis)
      : buildVerifyFigure(parseVerifyCsv(text));
  if (options.output.endsWith(".png")) {
    writeFileSync(options.output, renderPng(figure));
  } else {
    const stamp = options.timestamp ? new Date().toISOString() : undefined;
    writeFileSync(options.output, renderSvg(figure, stamp));
  }
}

export function main(argv: string[]): number {
  let options: CliOptions;
  try {
    options = parseArgs(argv);
  } catch (err) {
    console.error((err as Error).message);
    return 2;
  }
  try {
    renderFile(options);
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`schema error: ${err.message}`);
    } else {
      console.error((err as Error).message);
    }
    return 1;
  }
  return 0;
}

if (process.argv[1] && process.argv[1].endsWith("cli.js")) {
  process.exit(main(process.argv.slice(2)));
}
