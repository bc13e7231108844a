// CSV parsing for the two documented result formats: sweep rows from the
// harness and verify rows from the Monte Carlo checker.  Only the exact
// column schemas are accepted; a mismatch reports the missing columns.

export const SWEEP_COLUMNS = [
  "n", "k", "d", "sigma", "trials",
  "iters_mean", "iters_median", "iters_max", "iters_min",
  "final_potential_mean", "frac_capped", "max_epoch_mean",
  "min_delta_mean", "seed",
] as const;

export const VERIFY_COLUMNS = [
  "lemma", "params", "empirical", "bound", "margin", "verdict",
] as const;

export interface SweepRow {
  n: number;
  k: number;
  d: number;
  sigma: number;
  trials: number;
  iters_mean: number;
  iters_median: number;
  iters_max: number;
  iters_min: number;
  final_potential_mean: number;
  frac_capped: number;
  max_epoch_mean: number;
  min_delta_mean: number;
  seed: number;
}

export interface VerifyRow {
  lemma: string;
  params: string;
  empirical: number;
  bound: number;
  margin: number;
  verdict: string;
}

export class SchemaError extends Error {}

const NUMBER_RE = /^-?(\d+\.?\d*|\.\d+)([eE][-+]?\d+)?$/;

function parseNumber(cell: string, column: string, line: number): number {
  if (cell === "nan") return NaN;
  if (cell === "inf") return Infinity;
  if (cell === "-inf") return -Infinity;
  if (!NUMBER_RE.test(cell)) {
    throw new SchemaError(
      `line ${line}: column ${column} has non-numeric value ${JSON.stringify(cell)}`,
    );
  }
  return Number(cell);
}

function splitLines(text: string): string[] {
  return text.split(/\r?\n/).filter((line) => line.length > 0);
}

export type ResultKind = "sweep" | "verify";

export function detectKind(text: string): ResultKind {
  const lines = splitLines(text);
  if (lines.length === 0) {
    throw new SchemaError("results file is empty");
  }
  const header = lines[0].split(",");
  if (header.join(",") === SWEEP_COLUMNS.join(",")) return "sweep";
  if (header.join(",") === VERIFY_COLUMNS.join(",")) return "verify";
  const missingSweep = SWEEP_COLUMNS.filter((c) => !header.includes(c));
  const missingVerify = VERIFY_COLUMNS.filter((c) => !header.includes(c));
  const closest = missingSweep.length <= missingVerify.length
    ? { kind: "sweep", missing: missingSweep }
    : { kind: "verify", missing: missingVerify };
  throw new SchemaError(
    `header does not match any known schema; closest is ${closest.kind}, ` +
    `missing columns: ${closest.missing.join(", ")}`,
  );
}

export function parseSweepCsv(text: string): SweepRow[] {
  const lines = splitLines(text);
  if (lines.length === 0) throw new SchemaError("results file is empty");
  const header = lines[0].split(",");
  const missing = SWEEP_COLUMNS.filter((c) => !header.includes(c));
  if (missing.length > 0) {
    throw new SchemaError(`missing columns: ${missing.join(", ")}`);
  }
  if (lines.length === 1) throw new SchemaError("results file has no data rows");
  const index = new Map(header.map((name, i) => [name, i]));
  return lines.slice(1).map((line, rowIdx) => {
    const cells = line.split(",");
    if (cells.length !== header.length) {
      throw new SchemaError(
        `line ${rowIdx + 2}: expected ${header.length} cells, got ${cells.length}`,
      );
    }
    const row = {} as Record<string, number>;
    for (const column of SWEEP_COLUMNS) {
      row[column] = parseNumber(cells[index.get(column)!], column, rowIdx + 2);
    }
    return row as unknown as SweepRow;
  });
}

export function parseVerifyCsv(text: string): VerifyRow[] {
  const lines = splitLines(text);
  if (lines.length === 0) throw new SchemaError("results file is empty");
  const header = lines[0].split(",");
  const missing = VERIFY_COLUMNS.filter((c) => !header.includes(c));
  if (missing.length > 0) {
    throw new SchemaError(`missing columns: ${missing.join(", ")}`);
  }
  if (lines.length === 1) throw new SchemaError("results file has no data rows");
  const index = new Map(header.map((name, i) => [name, i]));
  return lines.slice(1).map((line, rowIdx) => {
    const cells = line.split(",");
    return {
      lemma: cells[index.get("lemma")!],
      params: cells[index.get("params")!],
      empirical: parseNumber(cells[index.get("empirical")!], "empirical", rowIdx + 2),
      bound: parseNumber(cells[index.get("bound")!], "bound", rowIdx + 2),
      margin: parseNumber(cells[index.get("margin")!], "margin", rowIdx + 2),
      verdict: cells[index.get("verdict")!],
    };
  });
}
