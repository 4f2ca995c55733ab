/**
 * Minimal grayscale PNG writer for raster figures. Deflate comes from
 * node's zlib with a pinned level, so output bytes are stable across runs.
 */

import { deflateSync } from "node:zlib";

const CRC_TABLE = (() => {
  const table = new Uint32Array(256);
  for (let n = 0; n < 256; n++) {
    let c = n;
    for (let k = 0; k < 8; k++) {
      c = c & 1 ? 0xedb88320 ^ (c >>> 1) : c >>> 1;
    }
    table[n] = c >>> 0;
  }
  return table;
})();

function crc32(buf: Buffer): number {
  let c = 0xffffffff;
  for (const byte of buf) c = CRC_TABLE[(c ^ byte) & 0xff]! ^ (c >>> 8);
  return (c ^ 0xffffffff) >>> 0;
}

function chunk(type: string, data: Buffer): Buffer {
  const head = Buffer.alloc(8);
  head.writeUInt32BE(data.length, 0);
  head.write(type, 4, "ascii");
  const crc = Buffer.alloc(4);
  crc.writeUInt32BE(crc32(Buffer.concat([head.subarray(4), data])), 0);
  return Buffer.concat([head, data, crc]);
}

/** 8-bit grayscale image from row-major samples in [0, 255]. */
export function encodeGrayPng(
  width: number,
  height: number,
  pixels: Uint8Array,
): Buffer {
  if (pixels.length !== width * height) {
    throw new Error(
      `pixel count ${pixels.length} does not match ${width}x${height}`,
    );
  }
  const ihdr = Buffer.alloc(13);
  ihdr.writeUInt32BE(width, 0);
  ihdr.writeUInt32BE(height, 4);
  ihdr[8] = 8; // bit depth
  ihdr[9] = 0; // grayscale
  // compression, filter, interlace all 0

  const raw = Buffer.alloc(height * (width + 1));
  for (let y = 0; y < height; y++) {
    raw[y * (width + 1)] = 0; // filter: none
    for (let x = 0; x < width; x++) {
      raw[y * (width + 1) + 1 + x] = pixels[y * width + x]!;
    }
  }
  return Buffer.concat([
    Buffer.from([0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a]),
    chunk("IHDR", ihdr),
    chunk("IDAT", deflateSync(raw, { level: 9 })),
    chunk("IEND", Buffer.alloc(0)),
  ]);
}

/** Nearest-neighbor upscale of a 0/1 cell grid to a viewable PNG. */
export function cellsToPng(side: number, cells: number[], scale = 16): Buffer {
  const dim = side * scale;
  const pixels = new Uint8Array(dim * dim);
  for (let y = 0; y < dim; y++) {
    const row = Math.floor(y / scale);
    for (let x = 0; x < dim; x++) {
      const col = Math.floor(x / scale);
      pixels[y * dim + x] = cells[row * side + col] ? 32 : 235;
    }
  }
  return encodeGrayPng(dim, dim, pixels);
}
