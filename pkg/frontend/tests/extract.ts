/**
 * Test-side SVG inspection: pull marks back out of an emitted figure.
 *
 * Deliberately independent of the rendering code: raw regex over the
 * serialized document, so a bug in the emitter cannot hide itself.
 */

export type Attrs = Record<string, string>;

/** All elements (self-closing or not) whose class equals `cls`. */
export function marksByClass(svg: string, cls: string): Attrs[] {
  const out: Attrs[] = [];
  for (const m of svg.matchAll(/<(\w+)\s+([^>]*?)\/?>/g)) {
    const attrs: Attrs = {};
    for (const a of m[2].matchAll(/([\w:-]+)="([^"]*)"/g)) {
      attrs[a[1]] = a[2];
    }
    if (attrs.class === cls) out.push(attrs);
  }
  return out;
}

/** Visible text bodies of <text> elements with the given class. */
export function textByClass(svg: string, cls: string): string[] {
  const out: string[] = [];
  const re = /<text\s+([^>]*?)>([^<]*)<\/text>/g;
  for (const m of svg.matchAll(re)) {
    if (/class="([^"]*)"/.exec(m[1])?.[1] === cls) out.push(m[2]);
  }
  return out;
}

/** Independent reading of a results CSV: raw string cells by column. */
export function readCsvRows(text: string): Array<Record<string, string>> {
  const lines = text.trim().split(/\r?\n/);
  if (lines[0] !== "# bench-results-v1") {
    throw new Error("golden file lost its schema tag");
  }
  const header = lines[1].split(",");
  return lines.slice(2).map((line) => {
    const cells = line.split(",");
    const row: Record<string, string> = {};
    header.forEach((h, i) => (row[h] = cells[i]));
    return row;
  });
}
