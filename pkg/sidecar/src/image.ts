/** Float RGB image buffer plus the resampling each backbone preprocesses with. */

import * as fs from "node:fs";
import { decodePng } from "./png";

export interface Image {
  width: number;
  height: number;
  /** row-major RGB in [0, 1] */
  data: Float64Array;
}

export function loadImage(path: string): Image {
  const raw = decodePng(fs.readFileSync(path));
  const { width, height, channels } = raw;
  const data = new Float64Array(width * height * 3);
  for (let i = 0; i < width * height; i++) {
    if (channels === 1) {
      const v = raw.data[i] / 255;
      data[i * 3] = v;
      data[i * 3 + 1] = v;
      data[i * 3 + 2] = v;
    } else {
      data[i * 3] = raw.data[i * channels] / 255;
      data[i * 3 + 1] = raw.data[i * channels + 1] / 255;
      data[i * 3 + 2] = raw.data[i * channels + 2] / 255;
    }
  }
  return { width, height, data };
}

/** Bilinear resize with pixel-center alignment. */
export function resize(image: Image, width: number, height: number): Image {
  if (image.width === width && image.height === height) {
    return image;
  }
  const out = new Float64Array(width * height * 3);
  const sx = image.width / width;
  const sy = image.height / height;
  for (let y = 0; y < height; y++) {
    const fy = Math.min(Math.max((y + 0.5) * sy - 0.5, 0), image.height - 1);
    const y0 = Math.floor(fy);
    const y1 = Math.min(y0 + 1, image.height - 1);
    const wy = fy - y0;
    for (let x = 0; x < width; x++) {
      const fx = Math.min(Math.max((x + 0.5) * sx - 0.5, 0), image.width - 1);
      const x0 = Math.floor(fx);
      const x1 = Math.min(x0 + 1, image.width - 1);
      const wx = fx - x0;
      for (let c = 0; c < 3; c++) {
        const a = image.data[(y0 * image.width + x0) * 3 + c];
        const b = image.data[(y0 * image.width + x1) * 3 + c];
        const d = image.data[(y1 * image.width + x0) * 3 + c];
        const e = image.data[(y1 * image.width + x1) * 3 + c];
        out[(y * width + x) * 3 + c] =
          a * (1 - wx) * (1 - wy) + b * wx * (1 - wy) + d * (1 - wx) * wy + e * wx * wy;
      }
    }
  }
  return { width, height, data: out };
}
