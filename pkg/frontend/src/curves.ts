/**
 * Error-vs-noise curves: one panel per error kind, one series per solver.
 *
 * Points are plotted exactly where the CSV puts them (no smoothing, no
 * aggregation) and each circle carries the raw CSV strings in data-x /
 * data-y. Series are drawn in ascending sweep order regardless of row
 * order in the file.
 */

import { BenchRow, BenchTable, solverNames } from "./schema.js";
import { PlotSpec, selectRows, requireSweep } from "./spec.js";
import {
  FONT,
  esc,
  fmt,
  legend,
  linearScale,
  niceTicks,
  solverColor,
  svgDocument,
  tag,
  xAxis,
  yAxis,
} from "./svg.js";

const PANEL_W = 380;
const PANEL_H = 300;
const MARGIN = { left: 70, right: 20, top: 40, bottom: 56 };

interface Panel {
  id: "t" | "r";
  title: string;
  yLabel: string;
  value: (r: BenchRow) => number;
  rawColumn: string;
}

const PANELS: Panel[] = [
  {
    id: "t",
    title: "translation error",
    yLabel: "mean translation error [m]",
    value: (r) => r.meanTErrM,
    rawColumn: "mean_t_err_m",
  },
  {
    id: "r",
    title: "rotation error",
    yLabel: "mean rotation error [deg]",
    value: (r) => r.meanRErrDeg,
    rawColumn: "mean_r_err_deg",
  },
];

export function renderCurves(table: BenchTable, spec: PlotSpec): string {
  requireSweep(table, "curves");
  const rows = selectRows(table, spec.solvers);
  const solvers = spec.solvers.length ? spec.solvers : solverNames({ ...table, rows });

  const sigmas = [...new Set(rows.map((r) => r.sweep.noise_sigma))].sort((a, b) => a - b);
  const xDomain: [number, number] = [sigmas[0], sigmas[sigmas.length - 1]];

  const panels = PANELS.map((panel, p) => {
    const x0 = p * PANEL_W;
    const values = rows.map(panel.value);
    const yMax = Math.max(...values) || 1;
    const sx = linearScale(xDomain, [x0 + MARGIN.left, x0 + PANEL_W - MARGIN.right]);
    const sy = linearScale([0, yMax * 1.05], [PANEL_H - MARGIN.bottom, MARGIN.top]);

    const marks = solvers.map((solver) => {
      const series = rows
        .filter((r) => r.solver === solver)
        .sort((a, b) => a.sweep.noise_sigma - b.sweep.noise_sigma);
      const pts = series
        .map((r) => `${fmt(sx(r.sweep.noise_sigma))},${fmt(sy(panel.value(r)))}`)
        .join(" ");
      const line = tag("polyline", {
        points: pts,
        fill: "none",
        stroke: solverColor(solver),
        "stroke-width": 1.5,
        class: "series",
        "data-panel": panel.id,
        "data-series": solver,
      });
      const dots = series
        .map((r) =>
          tag("circle", {
            cx: sx(r.sweep.noise_sigma),
            cy: sy(panel.value(r)),
            r: 3,
            fill: solverColor(solver),
            class: "pt",
            "data-panel": panel.id,
            "data-series": solver,
            "data-x": r.raw.noise_sigma,
            "data-y": r.raw[panel.rawColumn],
          }))
        .join("\n");
      return line + "\n" + dots;
    });

    return [
      `<text x="${fmt(x0 + PANEL_W / 2)}" y="20" text-anchor="middle" font-size="13" ${FONT}>`
      + `${esc(panel.title)}</text>`,
      xAxis(sx, sigmas, PANEL_H - MARGIN.bottom, spec.xLabel ?? "pixel noise sigma [px]"),
      yAxis(sy, niceTicks(0, yMax * 1.05), x0 + MARGIN.left, spec.yLabel ?? panel.yLabel,
        (t) => Number(t.toPrecision(3)).toString()),
      ...marks,
    ].join("\n");
  });

  const width = PANEL_W * PANELS.length + 110;
  const title = spec.title
    ? `<text x="${fmt(width / 2)}" y="14" text-anchor="middle" font-size="14" ${FONT}>`
      + `${esc(spec.title)}</text>`
    : "";
  const body = [title, ...panels, legend(solvers, PANEL_W * PANELS.length + 10, 50)].join("\n");
  return svgDocument(width, PANEL_H, body);
}
