/**
 * Feature backbones.
 *
 * Backbone identity is configuration: every report records which extractor
 * produced its features.  The default is a deterministic seeded
 * random-projection pyramid ("rpp"): fixed random conv projections with
 * ReLU between stages and global average pooling at the end.  It loads no
 * weights from disk, runs identically everywhere, and satisfies every
 * self-identity contract; swapping in a real pretrained extractor is a
 * matter of registering another loader under its own id.
 */

import { Image, resize } from "./image";
import { mulberry32 } from "./rng";

export class BackboneLoadFailure extends Error {}

export interface Backbone {
  readonly id: string;
  readonly dim: number;
  /** Global pooled feature vector. */
  embed(image: Image): Float64Array;
  /** Per-stage unit-normalized activations, for perceptual distances. */
  layers(image: Image): Float64Array[];
}

interface Stage {
  patch: number;
  inDim: number;
  outDim: number;
  weights: Float64Array; // outDim x (patch*patch*inDim)
}

class RandomProjectionPyramid implements Backbone {
  readonly id: string;
  readonly dim: number;
  private readonly input: number;
  private readonly stages: Stage[];

  constructor(id: string, input: number, dims: number[], seed: number) {
    this.id = id;
    this.input = input;
    this.dim = dims[dims.length - 1];
    const rand = mulberry32(seed);
    this.stages = [];
    let inDim = 3;
    for (const outDim of dims) {
      const patch = 2;
      const fan = patch * patch * inDim;
      const weights = new Float64Array(outDim * fan);
      const scale = Math.sqrt(2 / fan);
      for (let i = 0; i < weights.length; i++) {
        // Box-Muller over the seeded uniform stream
        const u = Math.max(rand(), 1e-12);
        const v = rand();
        weights[i] = Math.sqrt(-2 * Math.log(u)) * Math.cos(2 * Math.PI * v) * scale;
      }
      this.stages.push({ patch, inDim, outDim, weights });
      inDim = outDim;
    }
  }

  private forward(image: Image): { maps: Float64Array[]; sizes: number[]; dims: number[] } {
    const scaled = resize(image, this.input, this.input);
    let side = this.input;
    let channels = 3;
    let map = scaled.data;
    const maps: Float64Array[] = [];
    const sizes: number[] = [];
    const dims: number[] = [];
    for (const stage of this.stages) {
      const outSide = Math.floor(side / stage.patch);
      const out = new Float64Array(outSide * outSide * stage.outDim);
      const fan = stage.patch * stage.patch * channels;
      const patchBuf = new Float64Array(fan);
      for (let oy = 0; oy < outSide; oy++) {
        for (let ox = 0; ox < outSide; ox++) {
          let k = 0;
          for (let py = 0; py < stage.patch; py++) {
            const iy = oy * stage.patch + py;
            for (let px = 0; px < stage.patch; px++) {
              const ix = ox * stage.patch + px;
              const base = (iy * side + ix) * channels;
              for (let c = 0; c < channels; c++) {
                patchBuf[k++] = map[base + c];
              }
            }
          }
          const outBase = (oy * outSide + ox) * stage.outDim;
          for (let o = 0; o < stage.outDim; o++) {
            let acc = 0;
            const wBase = o * fan;
            for (let i = 0; i < fan; i++) {
              acc += stage.weights[wBase + i] * patchBuf[i];
            }
            out[outBase + o] = acc > 0 ? acc : 0; // ReLU
          }
        }
      }
      maps.push(out);
      sizes.push(outSide);
      dims.push(stage.outDim);
      map = out;
      side = outSide;
      channels = stage.outDim;
    }
    return { maps, sizes, dims };
  }

  embed(image: Image): Float64Array {
    const { maps, sizes, dims } = this.forward(image);
    const last = maps.length - 1;
    const side = sizes[last];
    const dim = dims[last];
    const pooled = new Float64Array(dim);
    const map = maps[last];
    for (let p = 0; p < side * side; p++) {
      for (let c = 0; c < dim; c++) {
        pooled[c] += map[p * dim + c];
      }
    }
    for (let c = 0; c < dim; c++) {
      pooled[c] /= side * side;
    }
    return pooled;
  }

  layers(image: Image): Float64Array[] {
    const { maps, sizes, dims } = this.forward(image);
    return maps.map((map, i) => unitNormalizeChannels(map, sizes[i], dims[i]));
  }
}

/** Channel-wise unit normalization per spatial position (LPIPS-style). */
function unitNormalizeChannels(map: Float64Array, side: number, dim: number): Float64Array {
  const out = new Float64Array(map.length);
  for (let p = 0; p < side * side; p++) {
    let norm = 0;
    for (let c = 0; c < dim; c++) {
      const v = map[p * dim + c];
      norm += v * v;
    }
    norm = Math.sqrt(norm) + 1e-10;
    for (let c = 0; c < dim; c++) {
      out[p * dim + c] = map[p * dim + c] / norm;
    }
  }
  return out;
}

const REGISTRY: Record<string, () => Backbone> = {
  "rpp-image-v1": () => new RandomProjectionPyramid("rpp-image-v1", 64, [24, 48, 96, 128], 0x5eed),
  "rpp-clip-image-v1": () => new RandomProjectionPyramid("rpp-clip-image-v1", 64, [32, 64, 128], 0xc11b),
  "rpp-inception-v1": () => new RandomProjectionPyramid("rpp-inception-v1", 64, [32, 64, 64], 0xf1d0),
};

export const DEFAULT_BACKBONES = {
  image: "rpp-image-v1",
  clipImage: "rpp-clip-image-v1",
  inception: "rpp-inception-v1",
};

const cache = new Map<string, Backbone>();

export function loadBackbone(id: string): Backbone {
  const cached = cache.get(id);
  if (cached) {
    return cached;
  }
  const factory = REGISTRY[id];
  if (!factory) {
    throw new BackboneLoadFailure(
      `unknown backbone ${JSON.stringify(id)}; known: ${Object.keys(REGISTRY).join(", ")}`
    );
  }
  const backbone = factory();
  cache.set(id, backbone);
  return backbone;
}

export function cosine(a: Float64Array, b: Float64Array): number {
  let dot = 0;
  let na = 0;
  let nb = 0;
  for (let i = 0; i < a.length; i++) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  const denom = Math.sqrt(na) * Math.sqrt(nb);
  return denom > 0 ? dot / denom : 0;
}
