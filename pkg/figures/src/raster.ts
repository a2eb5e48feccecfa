/** A plain RGBA pixel buffer with the few drawing primitives the figure needs. */

import type { Rgb } from "./colormap.js";

export class Raster {
  readonly width: number;
  readonly height: number;
  readonly pixels: Uint8Array;

  constructor(width: number, height: number, background: Rgb = [255, 255, 255]) {
    this.width = width;
    this.height = height;
    this.pixels = new Uint8Array(width * height * 4);
    for (let i = 0; i < width * height; i++) {
      this.pixels[i * 4] = background[0];
      this.pixels[i * 4 + 1] = background[1];
      this.pixels[i * 4 + 2] = background[2];
      this.pixels[i * 4 + 3] = 255;
    }
  }

  setPixel(x: number, y: number, color: Rgb): void {
    if (x < 0 || y < 0 || x >= this.width || y >= this.height) return;
    const offset = (y * this.width + x) * 4;
    this.pixels[offset] = color[0];
    this.pixels[offset + 1] = color[1];
    this.pixels[offset + 2] = color[2];
    this.pixels[offset + 3] = 255;
  }

  getPixel(x: number, y: number): Rgb {
    const offset = (y * this.width + x) * 4;
    return [this.pixels[offset], this.pixels[offset + 1], this.pixels[offset + 2]];
  }

  fillRect(x0: number, y0: number, w: number, h: number, color: Rgb): void {
    for (let y = y0; y < y0 + h; y++) {
      for (let x = x0; x < x0 + w; x++) {
        this.setPixel(x, y, color);
      }
    }
  }

  /** Filled square centered on (cx, cy). */
  drawSquare(cx: number, cy: number, halfSize: number, color: Rgb): void {
    this.fillRect(cx - halfSize, cy - halfSize, 2 * halfSize + 1, 2 * halfSize + 1, color);
  }

  /** Bresenham line. */
  drawLine(x0: number, y0: number, x1: number, y1: number, color: Rgb): void {
    let x = Math.round(x0);
    let y = Math.round(y0);
    const xEnd = Math.round(x1);
    const yEnd = Math.round(y1);
    const dx = Math.abs(xEnd - x);
    const dy = -Math.abs(yEnd - y);
    const sx = x < xEnd ? 1 : -1;
    const sy = y < yEnd ? 1 : -1;
    let err = dx + dy;
    for (;;) {
      this.setPixel(x, y, color);
      if (x === xEnd && y === yEnd) break;
      const e2 = 2 * err;
      if (e2 >= dy) {
        err += dy;
        x += sx;
      }
      if (e2 <= dx) {
        err += dx;
        y += sy;
      }
    }
  }

  /** Four-spoke star centered on (cx, cy). */
  drawStar(cx: number, cy: number, radius: number, color: Rgb): void {
    this.drawLine(cx - radius, cy, cx + radius, cy, color);
    this.drawLine(cx, cy - radius, cx, cy + radius, color);
    this.drawLine(cx - radius, cy - radius, cx + radius, cy + radius, color);
    this.drawLine(cx - radius, cy + radius, cx + radius, cy - radius, color);
  }

  /** Double-headed arrow along a direction through (cx, cy). */
  drawArrow(cx: number, cy: number, dx: number, dy: number, length: number, color: Rgb): void {
    const norm = Math.hypot(dx, dy);
    if (norm === 0) return;
    const ux = dx / norm;
    const uy = dy / norm;
    const half = length / 2;
    const tips: Array<[number, number, number]> = [
      [cx + ux * half, cy + uy * half, 1],
      [cx - ux * half, cy - uy * half, -1],
    ];
    this.drawLine(tips[1][0], tips[1][1], tips[0][0], tips[0][1], color);
    for (const [tx, ty, sign] of tips) {
      const headLen = Math.max(3, length / 8);
      // two short strokes angled back from each tip
      const bx = -ux * sign;
      const by = -uy * sign;
      const px = -uy;
      const py = ux;
      this.drawLine(tx, ty, tx + (bx + 0.6 * px) * headLen, ty + (by + 0.6 * py) * headLen, color);
      this.drawLine(tx, ty, tx + (bx - 0.6 * px) * headLen, ty + (by - 0.6 * py) * headLen, color);
    }
  }
}
