/**
 * Top-level render: read inputs, validate, dispatch to a figure kind,
 * write the SVG.
 */

import { readFileSync, writeFileSync } from "node:fs";

import { parseBenchCsv, mergeTables, BenchTable } from "./schema.js";
import { PlotSpec } from "./spec.js";
import { renderCurves } from "./curves.js";
import { renderHeatgrid } from "./heatgrid.js";
import { renderBar } from "./bar.js";

export function loadTables(paths: string[]): BenchTable {
  return mergeTables(paths.map((p) => parseBenchCsv(readFileSync(p, "utf8"))));
}

export function renderToString(table: BenchTable, spec: PlotSpec): string {
  switch (spec.kind) {
    case "curves":
      return renderCurves(table, spec);
    case "heatgrid":
      return renderHeatgrid(table, spec);
    case "bar":
      return renderBar(table, spec);
  }
}

export function render(spec: PlotSpec): void {
  const table = loadTables(spec.inputs);
  writeFileSync(spec.output, renderToString(table, spec));
}
