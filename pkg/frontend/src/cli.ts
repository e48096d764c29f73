/**
 * `plots <csv...> --kind curves|heatgrid|bar -o <file>`
 *
 * Exit codes: 0 written, 2 schema/parse problem, 3 empty selection,
 * 1 anything else (unreadable file, unwritable output).
 */

import yargs from "yargs";

import { SchemaError } from "./schema.js";
import { EmptySelectionError, FigureKind, PlotSpec } from "./spec.js";
import { render } from "./render.js";

export const EXIT_OK = 0;
export const EXIT_ERROR = 1;
export const EXIT_SCHEMA = 2;
export const EXIT_EMPTY = 3;

export function parseArgs(argv: string[]): PlotSpec {
  const args = yargs(argv)
    .usage("plots <csv...> --kind <kind> -o <file>")
    .command("$0 <csv...>", "render a benchmark results CSV to an SVG figure")
    .positional("csv", { type: "string", array: true, demandOption: true })
    .option("kind", {
      choices: ["curves", "heatgrid", "bar"] as const,
      demandOption: true,
      describe: "figure kind",
    })
    .option("output", {
      alias: "o",
      type: "string",
      demandOption: true,
      describe: "output SVG path",
    })
    .option("solver", {
      type: "string",
      array: true,
      default: [] as string[],
      describe: "keep only these solvers (repeatable)",
    })
    .option("x-label", { type: "string", describe: "x axis label override" })
    .option("y-label", { type: "string", describe: "y axis label override" })
    .option("title", { type: "string", describe: "figure title" })
    .strict()
    .exitProcess(false)
    .parseSync();

  return {
    inputs: args.csv as string[],
    kind: args.kind as FigureKind,
    output: args.output,
    solvers: (args.solver as string[]).flatMap((s) => s.split(",")).filter(Boolean),
    xLabel: args["x-label"] as string | undefined,
    yLabel: args["y-label"] as string | undefined,
    title: args.title as string | undefined,
  };
}

export function runCli(argv: string[], log: (msg: string) => void = console.error): number {
  let spec: PlotSpec;
  try {
    spec = parseArgs(argv);
  } catch (e) {
    log(`error: ${(e as Error).message}`);
    return EXIT_ERROR;
  }
  try {
    render(spec);
  } catch (e) {
    if (e instanceof SchemaError) {
      log(`schema error: ${e.message}`);
      return EXIT_SCHEMA;
    }
    if (e instanceof EmptySelectionError) {
      log(`empty selection: ${e.message}`);
      return EXIT_EMPTY;
    }
    log(`error: ${(e as Error).message}`);
    return EXIT_ERROR;
  }
  return EXIT_OK;
}
