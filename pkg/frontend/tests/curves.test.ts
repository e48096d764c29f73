import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import { parseBenchCsv, SchemaError } from "../src/schema.js";
import { renderCurves } from "../src/curves.js";
import { PlotSpec } from "../src/spec.js";
import { marksByClass, readCsvRows } from "./extract.js";

const HERE = dirname(fileURLToPath(import.meta.url));

const GOLDEN_PATH = join(HERE, "golden", "tiny_curves.csv");

function spec(overrides: Partial<PlotSpec> = {}): PlotSpec {
  return { inputs: [], kind: "curves", output: "", solvers: [], ...overrides };
}

describe("renderCurves", () => {
  const text = readFileSync(GOLDEN_PATH, "utf8");
  const table = parseBenchCsv(text);

  it("emits 2 series x 3 points per panel for the tiny golden", () => {
    const svg = renderCurves(table, spec());
    for (const panel of ["t", "r"]) {
      const series = marksByClass(svg, "series").filter((a) => a["data-panel"] === panel);
      expect(series.map((a) => a["data-series"]).sort()).toEqual(["1p1dp", "2dp"]);
      for (const solver of ["1p1dp", "2dp"]) {
        const pts = marksByClass(svg, "pt").filter(
          (a) => a["data-panel"] === panel && a["data-series"] === solver);
        expect(pts.length).toBe(3);
      }
    }
  });

  it("carries every CSV value verbatim", () => {
    const svg = renderCurves(table, spec());
    const rows = readCsvRows(text);
    const byPanel: Record<string, string> = { t: "mean_t_err_m", r: "mean_r_err_deg" };
    for (const [panel, column] of Object.entries(byPanel)) {
      const pts = marksByClass(svg, "pt").filter((a) => a["data-panel"] === panel);
      const got = pts.map((a) => `${a["data-series"]}|${a["data-x"]}|${a["data-y"]}`).sort();
      const want = rows.map((r) => `${r.solver}|${r.noise_sigma}|${r[column]}`).sort();
      expect(got).toEqual(want);
    }
  });

  it("positions points consistently with their values", () => {
    // the x positions of one series must be strictly increasing in sigma,
    // and equal y-values must collapse to equal pixel positions
    const svg = renderCurves(table, spec());
    const pts = marksByClass(svg, "pt")
      .filter((a) => a["data-panel"] === "t" && a["data-series"] === "2dp")
      .sort((a, b) => Number(a["data-x"]) - Number(b["data-x"]));
    const xs = pts.map((a) => Number(a.cx));
    expect(xs[0]).toBeLessThan(xs[1]);
    expect(xs[1]).toBeLessThan(xs[2]);
  });

  it("sorts series by sweep value even when rows arrive shuffled", () => {
    const lines = text.trim().split("\n");
    const shuffled = [lines[0], lines[1], lines[7], lines[3], lines[5],
      lines[2], lines[6], lines[4]].join("\n");
    const svg = renderCurves(parseBenchCsv(shuffled), spec());
    for (const series of marksByClass(svg, "series")) {
      const coords = series.points.split(" ").map((p) => Number(p.split(",")[0]));
      const sorted = [...coords].sort((a, b) => a - b);
      expect(coords).toEqual(sorted);
    }
  });

  it("applies the solver filter", () => {
    const svg = renderCurves(table, spec({ solvers: ["2dp"] }));
    const series = marksByClass(svg, "series");
    expect(series.every((a) => a["data-series"] === "2dp")).toBe(true);
    expect(series.length).toBe(2); // one per panel
  });

  it("rejects a contamination-sweep input", () => {
    const grid = parseBenchCsv(
      readFileSync(join(HERE, "golden", "robust_grid.csv"), "utf8"));
    expect(() => renderCurves(grid, spec())).toThrow(SchemaError);
  });
});
