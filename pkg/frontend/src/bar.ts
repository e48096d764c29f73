/**
 * Per-cell solver comparison bars for the selector study.
 *
 * Every CSV row becomes one bar: cells of the contamination grid are the
 * groups (labelled "o<outlier>/d<depth>", sorted by outlier then depth),
 * solvers are the bars within a group. No aggregation: each bar's height
 * encodes exactly one success_rate from the file, carried verbatim in
 * data-value.
 */

import { BenchRow, BenchTable, solverNames } from "./schema.js";
import { PlotSpec, selectRows, requireSweep } from "./spec.js";
import {
  FONT,
  esc,
  fmt,
  legend,
  linearScale,
  solverColor,
  svgDocument,
  tag,
  yAxis,
} from "./svg.js";

const BAR_W = 9;
const BAR_GAP = 2;
const GROUP_GAP = 12;
const PLOT_H = 300;
const MARGIN = { left: 70, top: 30, bottom: 74 };

export function renderBar(table: BenchTable, spec: PlotSpec): string {
  requireSweep(table, "bar");
  const rows = selectRows(table, spec.solvers);
  const solvers = spec.solvers.length ? spec.solvers : solverNames({ ...table, rows });

  const cells = [...new Set(rows.map((r) => `${r.sweep.outlier_rate}|${r.sweep.depth_rate}`))]
    .map((key) => key.split("|").map(Number) as [number, number])
    .sort((a, b) => a[0] - b[0] || a[1] - b[1]);

  const byCell = new Map<string, BenchRow>();
  for (const r of rows) {
    byCell.set(`${r.solver}|${r.sweep.outlier_rate}|${r.sweep.depth_rate}`, r);
  }

  const groupW = solvers.length * (BAR_W + BAR_GAP) + GROUP_GAP;
  const width = MARGIN.left + cells.length * groupW + 110;
  const height = MARGIN.top + PLOT_H + MARGIN.bottom;
  const sy = linearScale([0, 1], [MARGIN.top + PLOT_H, MARGIN.top]);

  const parts: string[] = [];
  parts.push(yAxis(sy, [0, 0.25, 0.5, 0.75, 1], MARGIN.left,
    spec.yLabel ?? "success rate", (t) => `${Math.round(t * 100)}%`));

  cells.forEach(([outlier, depth], c) => {
    const gx = MARGIN.left + c * groupW + GROUP_GAP / 2;
    solvers.forEach((solver, s) => {
      const row = byCell.get(`${solver}|${outlier}|${depth}`);
      if (row === undefined) return; // missing bar, never invented
      const x = gx + s * (BAR_W + BAR_GAP);
      const y = sy(row.successRate);
      parts.push(tag("rect", {
        x,
        y,
        width: BAR_W,
        height: MARGIN.top + PLOT_H - y,
        fill: solverColor(solver),
        class: "bar",
        "data-solver": solver,
        "data-outlier": row.raw.outlier_rate,
        "data-depth": row.raw.depth_rate,
        "data-value": row.raw.success_rate,
      }));
    });
    const cx = gx + (solvers.length * (BAR_W + BAR_GAP) - BAR_GAP) / 2;
    const ty = MARGIN.top + PLOT_H + 10;
    parts.push(
      `<text x="${fmt(cx)}" y="${fmt(ty)}" font-size="10" ${FONT} text-anchor="end" `
      + `transform="rotate(-55 ${fmt(cx)} ${fmt(ty)})" class="group-label">`
      + `${esc(`o${outlier}/d${depth}`)}</text>`);
  });

  parts.push(
    `<text x="${fmt(MARGIN.left + (cells.length * groupW) / 2)}" y="${fmt(height - 8)}" `
    + `text-anchor="middle" font-size="12" ${FONT}>`
    + `${esc(spec.xLabel ?? "grid cell (outlier rate / depth rate)")}</text>`);
  parts.push(legend(solvers, MARGIN.left + cells.length * groupW + 16, MARGIN.top + 14));

  const title = spec.title
    ? `<text x="${fmt(width / 2)}" y="16" text-anchor="middle" font-size="14" ${FONT}>`
      + `${esc(spec.title)}</text>`
    : "";
  return svgDocument(width, height, [title, ...parts].join("\n"));
}
