/**
 * Figure request: which files, which kind, where to write, what to show.
 */

import { BenchTable, BenchRow, SchemaError } from "./schema.js";

export type FigureKind = "curves" | "heatgrid" | "bar";

export interface PlotSpec {
  /** one or more results CSVs sharing a sweep shape */
  inputs: string[];
  kind: FigureKind;
  output: string;
  /** keep only these solvers (in this order); empty means all */
  solvers: string[];
  xLabel?: string;
  yLabel?: string;
  title?: string;
}

export class EmptySelectionError extends Error {}

/** Apply the solver filter; an empty result is an error, not an empty figure. */
export function selectRows(table: BenchTable, solvers: string[]): BenchRow[] {
  const rows = solvers.length === 0
    ? table.rows
    : table.rows.filter((r) => solvers.includes(r.solver));
  if (rows.length === 0) {
    const have = [...new Set(table.rows.map((r) => r.solver))].join(", ");
    throw new EmptySelectionError(
      solvers.length === 0
        ? "input contains no data rows"
        : `no rows match solver filter [${solvers.join(", ")}]; file has: ${have}`);
  }
  return rows;
}

/** Sweep columns a kind needs; mismatches are schema errors. */
export function requireSweep(table: BenchTable, kind: FigureKind): void {
  const shape = table.sweepColumns.join(",");
  if (kind === "curves" && shape !== "noise_sigma") {
    throw new SchemaError(
      `curves need an accuracy sweep (noise_sigma column); input sweeps over [${shape}]`);
  }
  if ((kind === "heatgrid" || kind === "bar") && shape !== "outlier_rate,depth_rate") {
    throw new SchemaError(
      `${kind} needs a contamination sweep (outlier_rate,depth_rate); input sweeps over [${shape}]`);
  }
}
