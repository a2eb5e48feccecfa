/** Heatmap composition: MMD field, class markers, star, curve, arrow. */

import { writeFileSync } from "node:fs";
import {
  CLASS_MARKER,
  GRAMIAN_ARROW,
  MASKED_CELL,
  REFERENCE_STAR,
  TRAJECTORY_CURVE,
  colormap,
} from "./colormap.js";
import { encodePng } from "./png.js";
import { Raster } from "./raster.js";
import { loadGramian, loadSweep, loadTrajectory, valueRange } from "./sweepData.js";
import type { SweepData } from "./sweepData.js";

export interface FigureSpec {
  sweepCsvPath: string;
  headerJsonPath: string;
  trajectoryCsvPath?: string;
  gramianJsonPath?: string;
  outPath: string;
  /** color scale bounds; undefined = auto from the finite ok cells */
  vmin?: number;
  vmax?: number;
  cellPx?: number;
}

export interface CellGeometry {
  cellPx: number;
  width: number;
  height: number;
  /** pixel center of the cell at grid indices (i along x1, j along x2) */
  cellCenter(i: number, j: number): { x: number; y: number };
  /** pixel position of a continuous state-space point */
  statePoint(x1: number, x2: number): { x: number; y: number };
}

export function geometryFor(sweep: SweepData, cellPx: number): CellGeometry {
  const { n1, n2 } = sweep;
  const { lower, upper } = sweep.header.grid;
  const width = n1 * cellPx;
  const height = n2 * cellPx;
  const spacing1 = (upper[0] - lower[0]) / (n1 - 1);
  const spacing2 = (upper[1] - lower[1]) / (n2 - 1);
  return {
    cellPx,
    width,
    height,
    cellCenter(i, j) {
      // x1 increases to the right, x2 increases upward
      return { x: Math.round((i + 0.5) * cellPx), y: Math.round(height - (j + 0.5) * cellPx) };
    },
    statePoint(x1, x2) {
      const i = (x1 - lower[0]) / spacing1;
      const j = (x2 - lower[1]) / spacing2;
      return { x: Math.round((i + 0.5) * cellPx), y: Math.round(height - (j + 0.5) * cellPx) };
    },
  };
}

export function renderToRaster(spec: FigureSpec): { raster: Raster; sweep: SweepData } {
  const sweep = loadSweep(spec.headerJsonPath, spec.sweepCsvPath);
  const cellPx = spec.cellPx ?? Math.max(6, Math.floor(600 / Math.max(sweep.n1, sweep.n2)));
  const geometry = geometryFor(sweep, cellPx);
  const raster = new Raster(geometry.width, geometry.height);

  let vmin: number;
  let vmax: number;
  if (spec.vmin !== undefined && spec.vmax !== undefined) {
    vmin = spec.vmin;
    vmax = spec.vmax;
  } else {
    const range = valueRange(sweep.cells);
    vmin = spec.vmin ?? range.min;
    vmax = spec.vmax ?? range.max;
  }

  // heatmap field; cells arrive with the second axis fastest
  sweep.cells.forEach((cell, index) => {
    const i = Math.floor(index / sweep.n2);
    const j = index % sweep.n2;
    const center = geometry.cellCenter(i, j);
    const color = cell.ok ? colormap(cell.mmdHat, vmin, vmax) : MASKED_CELL;
    raster.fillRect(center.x - Math.floor(cellPx / 2), center.y - Math.floor(cellPx / 2), cellPx, cellPx, color);
  });

  // nominal trajectory of the reference state
  if (spec.trajectoryCsvPath) {
    const points = loadTrajectory(spec.trajectoryCsvPath);
    for (let p = 1; p < points.length; p++) {
      const from = geometry.statePoint(points[p - 1].x1, points[p - 1].x2);
      const to = geometry.statePoint(points[p].x1, points[p].x2);
      raster.drawLine(from.x, from.y, to.x, to.y, TRAJECTORY_CURVE);
    }
  }

  // local direction of weak unobservability from the Gramian baseline
  if (spec.gramianJsonPath) {
    const gramian = loadGramian(spec.gramianJsonPath);
    const anchor = gramian.x0.length >= 2 ? gramian.x0 : sweep.header.x_a;
    const center = geometry.statePoint(anchor[0], anchor[1]);
    // screen y grows downward, state x2 grows upward
    raster.drawArrow(center.x, center.y, gramian.nullDirection[0], -gramian.nullDirection[1], 6 * cellPx, GRAMIAN_ARROW);
  }

  // empirical class of indistinguishability drawn above the local overlays,
  // so the whole class stays visible where the arrow runs along it
  const markerHalf = Math.max(1, Math.floor(cellPx / 4));
  sweep.cells.forEach((cell, index) => {
    if (!cell.ok || cell.trigger) return;
    const i = Math.floor(index / sweep.n2);
    const j = index % sweep.n2;
    const center = geometry.cellCenter(i, j);
    raster.drawSquare(center.x, center.y, markerHalf, CLASS_MARKER);
  });

  // reference state marker on top
  const star = geometry.statePoint(sweep.header.x_a[0], sweep.header.x_a[1]);
  raster.drawStar(star.x, star.y, Math.max(3, Math.floor(cellPx * 0.75)), REFERENCE_STAR);

  return { raster, sweep };
}

/** Render the figure and write the PNG; returns the encoded bytes. */
export function renderHeatmap(spec: FigureSpec): Buffer {
  const { raster } = renderToRaster(spec);
  const png = encodePng(raster);
  writeFileSync(spec.outPath, png);
  return png;
}
