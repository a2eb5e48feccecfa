#!/usr/bin/env node
/** render_heatmap --sweep CSV --header JSON [--trajectory CSV] [--gramian JSON] --out PNG */

import { renderHeatmap } from "./render.js";
import type { FigureSpec } from "./render.js";

function parseArgs(argv: string[]): FigureSpec {
  const values: Record<string, string> = {};
  for (let i = 0; i < argv.length; i += 2) {
    const flag = argv[i];
    if (!flag.startsWith("--")) {
      throw new Error(`unexpected argument ${flag}`);
    }
    const value = argv[i + 1];
    if (value === undefined) {
      throw new Error(`flag ${flag} needs a value`);
    }
    values[flag.slice(2)] = value;
  }
  const known = new Set(["sweep", "header", "trajectory", "gramian", "out", "vmin", "vmax", "cell-px"]);
  for (const key of Object.keys(values)) {
    if (!known.has(key)) {
      throw new Error(`unknown flag --${key}`);
    }
  }
  for (const required of ["sweep", "header", "out"]) {
    if (!(required in values)) {
      throw new Error(`missing required flag --${required}`);
    }
  }
  const spec: FigureSpec = {
    sweepCsvPath: values.sweep,
    headerJsonPath: values.header,
    outPath: values.out,
  };
  if (values.trajectory) spec.trajectoryCsvPath = values.trajectory;
  if (values.gramian) spec.gramianJsonPath = values.gramian;
  if (values.vmin !== undefined) spec.vmin = Number(values.vmin);
  if (values.vmax !== undefined) spec.vmax = Number(values.vmax);
  if (values["cell-px"] !== undefined) spec.cellPx = Number(values["cell-px"]);
  return spec;
}

function main(): number {
  try {
    const spec = parseArgs(process.argv.slice(2));
    const png = renderHeatmap(spec);
    console.log(`wrote ${spec.outPath} (${png.length} bytes)`);
    return 0;
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : err}`);
    return 1;
  }
}

process.exit(main());
