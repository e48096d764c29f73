/**
 * Minimal SVG assembly: string building, scales, shared figure chrome.
 *
 * Every data mark carries the source value verbatim in data-* attributes
 * so a figure can be audited (and is audited, in the tests) against the
 * CSV it came from without any geometric inversion.
 */

export interface LinearScale {
  (x: number): number;
  domain: [number, number];
  range: [number, number];
}

export function linearScale(domain: [number, number], range: [number, number]): LinearScale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0;
  const f = ((x: number) =>
    span === 0 ? (r0 + r1) / 2 : r0 + ((x - d0) / span) * (r1 - r0)) as LinearScale;
  f.domain = domain;
  f.range = range;
  return f;
}

export function esc(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Attribute assembly; undefined values are skipped. */
export function tag(
  name: string,
  attrs: Record<string, string | number | undefined>,
  body?: string,
): string {
  const parts = Object.entries(attrs)
    .filter(([, v]) => v !== undefined)
    .map(([k, v]) => `${k}="${typeof v === "number" ? fmt(v) : esc(v as string)}"`);
  const open = `<${name}${parts.length ? " " + parts.join(" ") : ""}`;
  return body === undefined ? `${open}/>` : `${open}>${body}</${name}>`;
}

/** Coordinate formatting: enough digits to invert, no float noise. */
export function fmt(x: number): string {
  return Number(x.toFixed(3)).toString();
}

export const SOLVER_COLORS: Record<string, string> = {
  "1p1dp": "#d62728",
  "2dp": "#1f77b4",
  "mc-1p1dp": "#ff9896",
  "mc-2dp": "#aec7e8",
  "single-1p1dp": "#e377c2",
  "single-2dp": "#17becf",
  mix: "#2ca02c",
  "mc-mix": "#98df8a",
};

let fallback = 0;
const FALLBACK_COLORS = ["#8c564b", "#9467bd", "#7f7f7f", "#bcbd22"];

export function solverColor(name: string): string {
  if (!(name in SOLVER_COLORS)) {
    SOLVER_COLORS[name] = FALLBACK_COLORS[fallback++ % FALLBACK_COLORS.length];
  }
  return SOLVER_COLORS[name];
}

export const FONT = "font-family=\"Helvetica, Arial, sans-serif\"";

export function svgDocument(width: number, height: number, body: string): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" `
    + `viewBox="0 0 ${width} ${height}">`,
    `<rect x="0" y="0" width="${width}" height="${height}" fill="white"/>`,
    body,
    "</svg>",
    "",
  ].join("\n");
}

/** Horizontal axis with ticks and a label. */
export function xAxis(
  scale: LinearScale,
  ticks: number[],
  y: number,
  label: string,
): string {
  const [r0, r1] = scale.range;
  const parts = [tag("line", { x1: r0, y1: y, x2: r1, y2: y, stroke: "#333" })];
  for (const t of ticks) {
    const x = scale(t);
    parts.push(tag("line", { x1: x, y1: y, x2: x, y2: y + 5, stroke: "#333" }));
    parts.push(
      `<text x="${fmt(x)}" y="${fmt(y + 18)}" text-anchor="middle" font-size="11" ${FONT}>`
      + `${esc(String(t))}</text>`);
  }
  parts.push(
    `<text x="${fmt((r0 + r1) / 2)}" y="${fmt(y + 36)}" text-anchor="middle" `
    + `font-size="12" ${FONT}>${esc(label)}</text>`);
  return parts.join("\n");
}

/** Vertical axis with ticks and a rotated label. */
export function yAxis(
  scale: LinearScale,
  ticks: number[],
  x: number,
  label: string,
  tickFormat: (t: number) => string = String,
): string {
  const [r0, r1] = scale.range;
  const parts = [tag("line", { x1: x, y1: r0, x2: x, y2: r1, stroke: "#333" })];
  for (const t of ticks) {
    const y = scale(t);
    parts.push(tag("line", { x1: x - 5, y1: y, x2: x, y2: y, stroke: "#333" }));
    parts.push(
      `<text x="${fmt(x - 8)}" y="${fmt(y + 4)}" text-anchor="end" font-size="11" ${FONT}>`
      + `${esc(tickFormat(t))}</text>`);
  }
  const cy = (r0 + r1) / 2;
  parts.push(
    `<text x="${fmt(x - 40)}" y="${fmt(cy)}" text-anchor="middle" font-size="12" ${FONT} `
    + `transform="rotate(-90 ${fmt(x - 40)} ${fmt(cy)})">${esc(label)}</text>`);
  return parts.join("\n");
}

export function legend(solvers: string[], x: number, y: number): string {
  return solvers
    .map((name, i) => {
      const yy = y + i * 16;
      return tag("rect", { x, y: yy - 9, width: 12, height: 10, fill: solverColor(name) })
        + `<text x="${fmt(x + 16)}" y="${fmt(yy)}" font-size="11" ${FONT}>${esc(name)}</text>`;
    })
    .join("\n");
}

/** "Nice" tick positions covering [lo, hi]. */
export function niceTicks(lo: number, hi: number, n = 5): number[] {
  if (!(hi > lo)) return [lo];
  const rawStep = (hi - lo) / n;
  const mag = Math.pow(10, Math.floor(Math.log10(rawStep)));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((s) => (hi - lo) / s <= n) ?? mag * 10;
  const start = Math.ceil(lo / step) * step;
  const out: number[] = [];
  for (let t = start; t <= hi + step * 1e-9; t += step) {
    out.push(Number(t.toPrecision(12)));
  }
  return out;
}
