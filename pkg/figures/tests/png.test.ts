import assert from "node:assert/strict";
import { test } from "node:test";
import { inflateSync } from "node:zlib";
import { encodePng } from "../src/png.js";
import { Raster } from "../src/raster.js";

function readChunks(png: Buffer): Array<{ type: string; data: Buffer }> {
  const chunks = [];
  let offset = 8;
  while (offset < png.length) {
    const length = png.readUInt32BE(offset);
    const type = png.subarray(offset + 4, offset + 8).toString("ascii");
    const data = png.subarray(offset + 8, offset + 8 + length);
    chunks.push({ type, data });
    offset += 12 + length;
  }
  return chunks;
}

test("produces a structurally valid PNG", () => {
  const raster = new Raster(3, 2);
  raster.setPixel(1, 0, [10, 20, 30]);
  const png = encodePng(raster);
  assert.deepEqual([...png.subarray(0, 8)], [0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a]);
  const chunks = readChunks(png);
  assert.deepEqual(chunks.map((c) => c.type), ["IHDR", "IDAT", "IEND"]);
  assert.equal(chunks[0].data.readUInt32BE(0), 3);
  assert.equal(chunks[0].data.readUInt32BE(4), 2);
});

test("scanlines round-trip through the deflate stream", () => {
  const raster = new Raster(2, 2, [0, 0, 0]);
  raster.setPixel(0, 0, [255, 0, 0]);
  raster.setPixel(1, 1, [0, 255, 0]);
  const chunks = readChunks(encodePng(raster));
  const raw = inflateSync(chunks[1].data);
  // 2 scanlines of (1 filter byte + 2 px * 4 bytes)
  assert.equal(raw.length, 2 * 9);
  assert.equal(raw[0], 0);
  assert.deepEqual([...raw.subarray(1, 5)], [255, 0, 0, 255]);
  assert.deepEqual([...raw.subarray(14, 18)], [0, 255, 0, 255]);
});

test("encoding is byte-deterministic", () => {
  const make = () => {
    const raster = new Raster(16, 16);
    for (let y = 0; y < 16; y++) {
      for (let x = 0; x < 16; x++) {
        raster.setPixel(x, y, [(x * 16) % 256, (y * 16) % 256, (x + y) % 256]);
      }
    }
    return encodePng(raster);
  };
  assert.deepEqual(make(), make());
});
