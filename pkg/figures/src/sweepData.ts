/** Parsing and validation of the sweep file contract (JSON header + CSV table). */

import { readFileSync } from "node:fs";
import { parseCsvRecords, requireNumber } from "./csv.js";

export interface SweepHeader {
  grid: { lower: number[]; upper: number[]; points: number[] };
  x_a: number[];
  sigma: number;
  alpha: number;
  m: number;
  seed: number;
  method: string;
}

export interface SweepCell {
  x1: number;
  x2: number;
  mmdHat: number;
  kappa: number;
  ratio: number;
  trigger: boolean;
  ok: boolean;
  status: string;
}

export interface SweepData {
  header: SweepHeader;
  /** cells in file order: first axis slowest, second fastest */
  cells: SweepCell[];
  n1: number;
  n2: number;
}

export function loadSweep(headerPath: string, tablePath: string): SweepData {
  const rawHeader = JSON.parse(readFileSync(headerPath, "utf8"));
  const grid = rawHeader.grid;
  if (!grid || !Array.isArray(grid.points)) {
    throw new Error(`${headerPath}: missing grid specification`);
  }
  if (grid.points.length !== 2) {
    throw new Error(`${headerPath}: heatmaps need a 2-D grid, got ${grid.points.length} swept dimensions`);
  }
  const header: SweepHeader = {
    grid: { lower: grid.lower, upper: grid.upper, points: grid.points },
    x_a: rawHeader.x_a,
    sigma: rawHeader.sigma,
    alpha: rawHeader.alpha,
    m: rawHeader.m,
    seed: rawHeader.seed,
    method: rawHeader.method,
  };
  const [n1, n2] = header.grid.points;
  const records = parseCsvRecords(readFileSync(tablePath, "utf8"), tablePath);
  if (records.length !== n1 * n2) {
    throw new Error(`${tablePath}: expected ${n1 * n2} cells for a ${n1}x${n2} grid, got ${records.length}`);
  }
  const cells = records.map((record, index) => {
    const context = `${tablePath} cell ${index}`;
    const status = record.status ?? "";
    const ok = status === "ok";
    return {
      x1: requireNumber(record, "x1", context),
      x2: requireNumber(record, "x2", context),
      mmdHat: requireNumber(record, "mmd_hat", context),
      kappa: requireNumber(record, "kappa", context),
      ratio: requireNumber(record, "ratio", context),
      trigger: record.trigger === "true",
      ok,
      status,
    };
  });
  return { header, cells, n1, n2 };
}

export interface TrajectoryPoint {
  x1: number;
  x2: number;
}

/** Load the nominal state path (columns t, x1, x2, ...) for the overlay curve. */
export function loadTrajectory(path: string): TrajectoryPoint[] {
  const records = parseCsvRecords(readFileSync(path, "utf8"), path);
  return records.map((record, index) => ({
    x1: requireNumber(record, "x1", `${path} row ${index + 2}`),
    x2: requireNumber(record, "x2", `${path} row ${index + 2}`),
  }));
}

export interface GramianInfo {
  nullDirection: number[];
  x0: number[];
}

export function loadGramian(path: string): GramianInfo {
  const raw = JSON.parse(readFileSync(path, "utf8"));
  if (!Array.isArray(raw.null_direction)) {
    throw new Error(`${path}: missing null_direction`);
  }
  return { nullDirection: raw.null_direction, x0: raw.x0 ?? [] };
}

/** Range of the finite MMD values over ok cells (the auto color scale). */
export function valueRange(cells: SweepCell[]): { min: number; max: number } {
  let min = Infinity;
  let max = -Infinity;
  for (const cell of cells) {
    if (!cell.ok || !Number.isFinite(cell.mmdHat)) continue;
    min = Math.min(min, cell.mmdHat);
    max = Math.max(max, cell.mmdHat);
  }
  if (!(min <= max)) {
    throw new Error("no finite MMD values to scale the colormap");
  }
  return { min, max };
}
