/**
 * Minimal PNG codec for the 8-bit RGB(A)/gray images the harness exports.
 * Decoding supports all five scanline filters; encoding writes unfiltered
 * scanlines (used by the tests to build fixtures).
 */

import * as zlib from "node:zlib";

export interface RawImage {
  width: number;
  height: number;
  channels: number;
  /** row-major uint8 samples */
  data: Uint8Array;
}

const SIGNATURE = Buffer.from([0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a]);

const CHANNELS: Record<number, number> = { 0: 1, 2: 3, 6: 4 };

export function decodePng(blob: Buffer): RawImage {
  if (!blob.subarray(0, 8).equals(SIGNATURE)) {
    throw new Error("not a PNG file");
  }
  let pos = 8;
  let width = 0;
  let height = 0;
  let colorType = -1;
  const idat: Buffer[] = [];
  while (pos < blob.length) {
    const length = blob.readUInt32BE(pos);
    const tag = blob.toString("ascii", pos + 4, pos + 8);
    const payload = blob.subarray(pos + 8, pos + 8 + length);
    pos += 12 + length;
    if (tag === "IHDR") {
      width = payload.readUInt32BE(0);
      height = payload.readUInt32BE(4);
      const bitDepth = payload.readUInt8(8);
      colorType = payload.readUInt8(9);
      const interlace = payload.readUInt8(12);
      if (bitDepth !== 8 || !(colorType in CHANNELS) || interlace !== 0) {
        throw new Error("unsupported PNG flavor");
      }
    } else if (tag === "IDAT") {
      idat.push(Buffer.from(payload));
    } else if (tag === "IEND") {
      break;
    }
  }
  if (width === 0 || colorType < 0) {
    throw new Error("missing IHDR");
  }
  const channels = CHANNELS[colorType];
  const stride = width * channels;
  const raw = zlib.inflateSync(Buffer.concat(idat));
  const out = new Uint8Array(height * stride);
  const prev = new Uint8Array(stride);
  let offset = 0;
  for (let y = 0; y < height; y++) {
    const filter = raw[offset++];
    const line = raw.subarray(offset, offset + stride);
    offset += stride;
    const recon = out.subarray(y * stride, (y + 1) * stride);
    for (let i = 0; i < stride; i++) {
      const left = i >= channels ? recon[i - channels] : 0;
      const up = prev[i];
      const upLeft = i >= channels ? prev[i - channels] : 0;
      let pred = 0;
      switch (filter) {
        case 0: pred = 0; break;
        case 1: pred = left; break;
        case 2: pred = up; break;
        case 3: pred = (left + up) >> 1; break;
        case 4: {
          const p = left + up - upLeft;
          const pa = Math.abs(p - left);
          const pb = Math.abs(p - up);
          const pc = Math.abs(p - upLeft);
          pred = pa <= pb && pa <= pc ? left : pb <= pc ? up : upLeft;
          break;
        }
        default:
          throw new Error(`bad PNG filter ${filter}`);
      }
      recon[i] = (line[i] + pred) & 0xff;
    }
    prev.set(recon);
  }
  return { width, height, channels, data: out };
}

function chunk(tag: string, payload: Buffer): Buffer {
  const head = Buffer.alloc(8);
  head.writeUInt32BE(payload.length, 0);
  head.write(tag, 4, "ascii");
  const crcInput = Buffer.concat([head.subarray(4), payload]);
  const crcBuf = Buffer.alloc(4);
  crcBuf.writeUInt32BE(crc32(crcInput) >>> 0, 0);
  return Buffer.concat([head, payload, crcBuf]);
}

export function encodePng(image: RawImage): Buffer {
  const { width, height, channels, data } = image;
  const colorType = channels === 3 ? 2 : channels === 4 ? 6 : 0;
  const header = Buffer.alloc(13);
  header.writeUInt32BE(width, 0);
  header.writeUInt32BE(height, 4);
  header.writeUInt8(8, 8);
  header.writeUInt8(colorType, 9);
  const stride = width * channels;
  const raw = Buffer.alloc(height * (stride + 1));
  for (let y = 0; y < height; y++) {
    raw[y * (stride + 1)] = 0;
    raw.set(data.subarray(y * stride, (y + 1) * stride), y * (stride + 1) + 1);
  }
  return Buffer.concat([
    SIGNATURE,
    chunk("IHDR", header),
    chunk("IDAT", zlib.deflateSync(raw, { level: 6 })),
    chunk("IEND", Buffer.alloc(0)),
  ]);
}

let crcTable: Uint32Array | null = null;

function crc32(buf: Buffer): number {
  if (!crcTable) {
    crcTable = new Uint32Array(256);
    for (let n = 0; n < 256; n++) {
      let c = n;
      for (let k = 0; k < 8; k++) {
        c = c & 1 ? 0xedb88320 ^ (c >>> 1) : c >>> 1;
      }
      crcTable[n] = c >>> 0;
    }
  }
  let crc = 0xffffffff;
  for (const byte of buf) {
    crc = crcTable[(crc ^ byte) & 0xff] ^ (crc >>> 8);
  }
  return (crc ^ 0xffffffff) >>> 0;
}
