/**
 * Figure-generation acceptance: render the linear-system class-recovery
 * sweep (produced by the primary acceptance experiment, seed 0) and check
 * that the silent-cell markers trace the diagonal blind direction and that
 * re-rendering yields identical bytes.
 */

import assert from "node:assert/strict";
import { readFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join, dirname } from "node:path";
import { fileURLToPath } from "node:url";
import { test } from "node:test";
import { CLASS_MARKER } from "../src/colormap.js";
import { geometryFor, renderHeatmap, renderToRaster } from "../src/render.js";
import { loadSweep } from "../src/sweepData.js";

const here = dirname(fileURLToPath(import.meta.url));
const fixture = join(here, "..", "..", "fixtures", "linear");
const spec = {
  sweepCsvPath: join(fixture, "sweep_table.csv"),
  headerJsonPath: join(fixture, "sweep_header.json"),
  trajectoryCsvPath: join(fixture, "sweep_nominal.csv"),
  gramianJsonPath: join(fixture, "gramian.json"),
  outPath: join(tmpdir(), "linear_heatmap.png"),
};

test("class markers concentrate along the diagonal", () => {
  const sweep = loadSweep(spec.headerJsonPath, spec.sweepCsvPath);
  const xA = sweep.header.x_a;
  const cellWidth = Math.max(
    (sweep.header.grid.upper[0] - sweep.header.grid.lower[0]) / (sweep.n1 - 1),
    (sweep.header.grid.upper[1] - sweep.header.grid.lower[1]) / (sweep.n2 - 1),
  );
  const silent = sweep.cells.filter((c) => c.ok && !c.trigger);
  assert.ok(silent.length >= 5, `expected a visible class, got ${silent.length} silent cells`);
  const perp = silent.map((c) => Math.abs(c.x1 - xA[0] - (c.x2 - xA[1])) / Math.SQRT2);
  const mean = perp.reduce((a, b) => a + b, 0) / perp.length;
  assert.ok(mean < cellWidth, `mean perpendicular distance ${mean} exceeds one cell width ${cellWidth}`);
  const nearFraction = perp.filter((d) => d <= 1.5 * cellWidth).length / perp.length;
  assert.ok(nearFraction >= 0.9, `only ${nearFraction} of class markers lie near the diagonal`);
});

test("rendered image carries a marker at every silent cell", () => {
  const { raster, sweep } = renderToRaster(spec);
  const cellPx = Math.max(6, Math.floor(600 / Math.max(sweep.n1, sweep.n2)));
  const geometry = geometryFor(sweep, cellPx);
  const half = Math.floor(cellPx / 2);
  let markers = 0;
  sweep.cells.forEach((cell, index) => {
    if (!cell.ok || cell.trigger) return;
    const i = Math.floor(index / sweep.n2);
    const j = index % sweep.n2;
    const center = geometry.cellCenter(i, j);
    let found = false;
    for (let dy = -half; dy < half && !found; dy++) {
      for (let dx = -half; dx < half && !found; dx++) {
        const pixel = raster.getPixel(center.x + dx, center.y + dy);
        found = pixel[0] === CLASS_MARKER[0] && pixel[1] === CLASS_MARKER[1] && pixel[2] === CLASS_MARKER[2];
      }
    }
    assert.ok(found, `missing marker at cell (${i}, ${j})`);
    markers += 1;
  });
  assert.ok(markers >= 5);
});

test("deterministic re-render yields identical image bytes", () => {
  const first = renderHeatmap(spec);
  const second = renderHeatmap(spec);
  assert.deepEqual(first, second);
  assert.deepEqual(readFileSync(spec.outPath), second);
  assert.ok(first.length > 1000, "image suspiciously small");
});
