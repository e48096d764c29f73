/**
 * Success-rate heat grids over the (outlier rate x depth rate) sweep.
 *
 * One panel per solver. Rows are outlier rates, columns are depth rates,
 * both in ascending order as found in the data; the panel shape therefore
 * matches the sweep's dimensions exactly. Each populated cell carries its
 * rate verbatim in data-value and shows it as a percentage; cells the
 * sweep never produced stay blank (class "missing") and are never filled
 * by interpolation.
 */

import { BenchRow, BenchTable, solverNames } from "./schema.js";
import { PlotSpec, selectRows, requireSweep } from "./spec.js";
import { FONT, esc, fmt, svgDocument, tag } from "./svg.js";

const CELL = 52;
const MARGIN = { left: 86, top: 56, right: 16, bottom: 40 };
const PANEL_GAP = 26;

/** Monochrome ramp: 0 -> light, 1 -> saturated. */
function cellColor(rate: number): string {
  const t = Math.min(1, Math.max(0, rate));
  const r = Math.round(247 - 214 * t);
  const g = Math.round(251 - 146 * t);
  const b = Math.round(255 - 75 * t);
  return `rgb(${r},${g},${b})`;
}

function textColor(rate: number): string {
  return rate > 0.6 ? "white" : "#222";
}

export function renderHeatgrid(table: BenchTable, spec: PlotSpec): string {
  requireSweep(table, "heatgrid");
  const rows = selectRows(table, spec.solvers);
  const solvers = spec.solvers.length ? spec.solvers : solverNames({ ...table, rows });

  const outliers = [...new Set(rows.map((r) => r.sweep.outlier_rate))].sort((a, b) => a - b);
  const depths = [...new Set(rows.map((r) => r.sweep.depth_rate))].sort((a, b) => a - b);

  const gridW = depths.length * CELL;
  const gridH = outliers.length * CELL;
  const panelW = MARGIN.left + gridW + MARGIN.right;
  const height = MARGIN.top + gridH + MARGIN.bottom;

  const byCell = new Map<string, BenchRow>();
  for (const r of rows) {
    byCell.set(`${r.solver}|${r.sweep.outlier_rate}|${r.sweep.depth_rate}`, r);
  }

  const panels = solvers.map((solver, p) => {
    const x0 = p * (panelW + PANEL_GAP);
    const parts: string[] = [];
    parts.push(
      `<text x="${fmt(x0 + MARGIN.left + gridW / 2)}" y="24" text-anchor="middle" `
      + `font-size="13" ${FONT}>${esc(solver)}</text>`);

    for (let i = 0; i < outliers.length; i++) {
      for (let j = 0; j < depths.length; j++) {
        const x = x0 + MARGIN.left + j * CELL;
        const y = MARGIN.top + i * CELL;
        const row = byCell.get(`${solver}|${outliers[i]}|${depths[j]}`);
        if (row === undefined) {
          parts.push(tag("rect", {
            x, y, width: CELL, height: CELL,
            fill: "white", stroke: "#bbb", "stroke-dasharray": "3,3",
            class: "missing",
            "data-solver": solver,
            "data-outlier": String(outliers[i]),
            "data-depth": String(depths[j]),
          }));
          continue;
        }
        const rate = row.successRate;
        const cell = tag("rect", {
          x, y, width: CELL, height: CELL,
          fill: cellColor(rate), stroke: "#888",
          class: "cell",
          "data-solver": solver,
          "data-outlier": row.raw.outlier_rate,
          "data-depth": row.raw.depth_rate,
          "data-value": row.raw.success_rate,
        })
          + `<text x="${fmt(x + CELL / 2)}" y="${fmt(y + CELL / 2 + 4)}" text-anchor="middle" `
          + `font-size="12" fill="${textColor(rate)}" ${FONT} class="cell-label">`
          + `${esc(Math.round(rate * 100) + "%")}</text>`;
        parts.push(cell);
      }
    }

    for (let j = 0; j < depths.length; j++) {
      parts.push(
        `<text x="${fmt(x0 + MARGIN.left + j * CELL + CELL / 2)}" `
        + `y="${fmt(MARGIN.top + gridH + 16)}" text-anchor="middle" font-size="11" ${FONT}>`
        + `${esc(String(depths[j]))}</text>`);
    }
    parts.push(
      `<text x="${fmt(x0 + MARGIN.left + gridW / 2)}" y="${fmt(MARGIN.top + gridH + 32)}" `
      + `text-anchor="middle" font-size="12" ${FONT}>`
      + `${esc(spec.xLabel ?? "reliable depth rate")}</text>`);

    if (p === 0) {
      for (let i = 0; i < outliers.length; i++) {
        parts.push(
          `<text x="${fmt(x0 + MARGIN.left - 8)}" `
          + `y="${fmt(MARGIN.top + i * CELL + CELL / 2 + 4)}" text-anchor="end" `
          + `font-size="11" ${FONT}>${esc(String(outliers[i]))}</text>`);
      }
      const cy = MARGIN.top + gridH / 2;
      parts.push(
        `<text x="${fmt(x0 + 20)}" y="${fmt(cy)}" text-anchor="middle" font-size="12" ${FONT} `
        + `transform="rotate(-90 ${fmt(x0 + 20)} ${fmt(cy)})">`
        + `${esc(spec.yLabel ?? "outlier rate")}</text>`);
    }
    return parts.join("\n");
  });

  const width = solvers.length * panelW + (solvers.length - 1) * PANEL_GAP;
  const title = spec.title
    ? `<text x="${fmt(width / 2)}" y="12" text-anchor="middle" font-size="14" ${FONT}>`
      + `${esc(spec.title)}</text>`
    : "";
  return svgDocument(width, height, [title, ...panels].join("\n"));
}
