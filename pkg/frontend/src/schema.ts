/**
 * Versioned benchmark CSV: parsing and validation.
 *
 * A results file starts with the schema tag line, then a header whose
 * sweep columns depend on the experiment (noise_sigma for the accuracy
 * sweep; outlier_rate,depth_rate for the contamination grids), then one
 * row per (cell, solver). Anything else is a schema error: figures must
 * never be rendered from data whose meaning is uncertain.
 */

import Papa from "papaparse";

export const SCHEMA_TAG = "# bench-results-v1";

const FIXED_COLUMNS = [
  "solver",
  "trials",
  "success_rate",
  "mean_t_err_m",
  "mean_r_err_deg",
  "mean_iters",
  "wall_ms",
  "seed",
] as const;

const SWEEP_SHAPES: ReadonlyArray<readonly string[]> = [
  ["noise_sigma"],
  ["outlier_rate", "depth_rate"],
];

export class SchemaError extends Error {}

export interface BenchRow {
  experiment: string;
  /** sweep-column name -> numeric value, e.g. {outlier_rate, depth_rate} */
  sweep: Record<string, number>;
  solver: string;
  trials: number;
  successRate: number;
  meanTErrM: number;
  meanRErrDeg: number;
  /** raw CSV strings by column, preserved for exact round-trip checks */
  raw: Record<string, string>;
}

export interface BenchTable {
  sweepColumns: string[];
  rows: BenchRow[];
}

function parseNumber(field: string, value: string, line: number): number {
  const x = Number(value);
  if (value.trim() === "" || !Number.isFinite(x)) {
    throw new SchemaError(`line ${line}: column '${field}' is not a finite number: '${value}'`);
  }
  return x;
}

/** Parse and validate one results file's text. */
export function parseBenchCsv(text: string): BenchTable {
  const firstLine = text.split(/\r?\n/, 1)[0] ?? "";
  if (firstLine.trim() !== SCHEMA_TAG) {
    throw new SchemaError(
      `missing schema tag: expected first line '${SCHEMA_TAG}', got '${firstLine.trim()}'`);
  }
  const body = text.slice(text.indexOf("\n") + 1);
  const parsed = Papa.parse<Record<string, string>>(body, {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const e = parsed.errors[0];
    throw new SchemaError(`CSV parse error at row ${e.row}: ${e.message}`);
  }
  const fields = parsed.meta.fields ?? [];
  const shape = SWEEP_SHAPES.find((sweep) => {
    const expected = ["experiment", ...sweep, ...FIXED_COLUMNS];
    return expected.length === fields.length
      && expected.every((name, i) => fields[i] === name);
  });
  if (!shape) {
    throw new SchemaError(
      `unrecognized column layout [${fields.join(",")}]; `
      + `expected experiment,<sweep columns>,${FIXED_COLUMNS.join(",")}`);
  }
  const sweepColumns = [...shape];

  const rows: BenchRow[] = parsed.data.map((rec, i) => {
    const line = i + 3; // 1-based, after tag and header
    const sweep: Record<string, number> = {};
    for (const col of sweepColumns) {
      sweep[col] = parseNumber(col, rec[col], line);
    }
    if (!rec.solver || rec.solver.trim() === "") {
      throw new SchemaError(`line ${line}: empty solver name`);
    }
    return {
      experiment: rec.experiment,
      sweep,
      solver: rec.solver,
      trials: parseNumber("trials", rec.trials, line),
      successRate: parseNumber("success_rate", rec.success_rate, line),
      meanTErrM: parseNumber("mean_t_err_m", rec.mean_t_err_m, line),
      meanRErrDeg: parseNumber("mean_r_err_deg", rec.mean_r_err_deg, line),
      raw: { ...rec },
    };
  });
  return { sweepColumns, rows };
}

/** Parse several files and require them to share one sweep shape. */
export function mergeTables(tables: BenchTable[]): BenchTable {
  if (tables.length === 0) {
    throw new SchemaError("no input tables");
  }
  const [first, ...rest] = tables;
  for (const t of rest) {
    if (t.sweepColumns.join(",") !== first.sweepColumns.join(",")) {
      throw new SchemaError(
        `inputs mix sweep shapes: [${first.sweepColumns}] vs [${t.sweepColumns}]`);
    }
  }
  return {
    sweepColumns: first.sweepColumns,
    rows: tables.flatMap((t) => t.rows),
  };
}

/** Distinct solver names in row order of first appearance. */
export function solverNames(table: BenchTable): string[] {
  const seen: string[] = [];
  for (const row of table.rows) {
    if (!seen.includes(row.solver)) seen.push(row.solver);
  }
  return seen;
}
