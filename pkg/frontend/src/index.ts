export { SCHEMA_TAG, SchemaError, parseBenchCsv, mergeTables, solverNames } from "./schema.js";
export type { BenchRow, BenchTable } from "./schema.js";
export { EmptySelectionError, selectRows, requireSweep } from "./spec.js";
export type { FigureKind, PlotSpec } from "./spec.js";
export { renderCurves } from "./curves.js";
export { renderHeatgrid } from "./heatgrid.js";
export { renderBar } from "./bar.js";
export { loadTables, renderToString, render } from "./render.js";
export { runCli, parseArgs, EXIT_OK, EXIT_ERROR, EXIT_SCHEMA, EXIT_EMPTY } from "./cli.js";
