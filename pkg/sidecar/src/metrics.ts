/**
 * Metric computations over image/frame sets.
 *
 * Similarity metrics (dino, clip_*) report on the x100 cosine scale except
 * dino itself, which stays in [-1, 1]; distance metrics (lpips) report raw;
 * distributional metrics (fid, fid_clip, fvd) work on whole sets and need
 * at least two items per side.
 */

import { Backbone, cosine, DEFAULT_BACKBONES, loadBackbone } from "./backbone";
import { Image } from "./image";
import { embedText, TEXT_BACKBONE_ID } from "./textembed";
import { frechetDistance, moments } from "./stats";

export type MetricKind =
  | "fid"
  | "fid_clip"
  | "clip_t2i"
  | "clip_i2i"
  | "dino"
  | "lpips"
  | "fvd"
  | "clip_t2v"
  | "clip_v2v";

export const METRIC_KINDS: MetricKind[] = [
  "fid", "fid_clip", "clip_t2i", "clip_i2i", "dino", "lpips", "fvd",
  "clip_t2v", "clip_v2v",
];

export const DISTRIBUTIONAL: ReadonlySet<MetricKind> = new Set([
  "fid", "fid_clip", "fvd",
]);

export const NEEDS_PROMPTS: ReadonlySet<MetricKind> = new Set([
  "clip_t2i", "clip_t2v",
]);

export class MissingPrompts extends Error {}
export class TooFewSamples extends Error {}

export interface BackboneConfig {
  image: string;
  clipImage: string;
  inception: string;
}

export const DEFAULT_CONFIG: BackboneConfig = { ...DEFAULT_BACKBONES };

export interface MetricRequest {
  kind: MetricKind;
  /** one entry per item; each entry is the item's frame list (length 1 for stills) */
  refItems: Image[][];
  predItems: Image[][];
  prompts?: (string | null)[];
  config?: Partial<BackboneConfig>;
}

function requireBackbones(config?: Partial<BackboneConfig>): {
  image: Backbone;
  clipImage: Backbone;
  inception: Backbone;
  ids: Record<string, string>;
} {
  const merged = { ...DEFAULT_CONFIG, ...(config ?? {}) };
  const image = loadBackbone(merged.image);
  const clipImage = loadBackbone(merged.clipImage);
  const inception = loadBackbone(merged.inception);
  return {
    image,
    clipImage,
    inception,
    ids: {
      image: image.id,
      clip_image: clipImage.id,
      clip_text: TEXT_BACKBONE_ID,
      inception: inception.id,
    },
  };
}

export function backboneIds(config?: Partial<BackboneConfig>): Record<string, string> {
  return requireBackbones(config).ids;
}

/** Mean pooled feature over an item's frames. */
function videoEmbed(backbone: Backbone, frames: Image[]): Float64Array {
  const dim = backbone.dim;
  const out = new Float64Array(2 * dim);
  let prev: Float64Array | null = null;
  for (const frame of frames) {
    const f = backbone.embed(frame);
    for (let i = 0; i < dim; i++) {
      out[i] += f[i] / frames.length;
    }
    if (prev) {
      for (let i = 0; i < dim; i++) {
        out[dim + i] += Math.abs(f[i] - prev[i]) / Math.max(frames.length - 1, 1);
      }
    }
    prev = f;
  }
  return out;
}

function lpipsPair(backbone: Backbone, a: Image, b: Image): number {
  const layersA = backbone.layers(a);
  const layersB = backbone.layers(b);
  let total = 0;
  for (let l = 0; l < layersA.length; l++) {
    const la = layersA[l];
    const lb = layersB[l];
    let acc = 0;
    for (let i = 0; i < la.length; i++) {
      const d = la[i] - lb[i];
      acc += d * d;
    }
    total += acc / la.length;
  }
  return total / layersA.length;
}

function meanOverFrames(
  refFrames: Image[],
  predFrames: Image[],
  fn: (a: Image, b: Image) => number
): number {
  const n = Math.min(refFrames.length, predFrames.length);
  let acc = 0;
  for (let k = 0; k < n; k++) {
    acc += fn(refFrames[k], predFrames[k]);
  }
  return acc / n;
}

export interface MetricResult {
  kind: MetricKind;
  score: number;
  perItem?: number[];
  backbones: Record<string, string>;
}

export function compute(request: MetricRequest): MetricResult {
  const { kind } = request;
  const backbones = requireBackbones(request.config);
  const nItems = request.predItems.length;
  if (nItems === 0 || request.refItems.length === 0) {
    throw new TooFewSamples(`${kind} needs non-empty image sets`);
  }
  if (NEEDS_PROMPTS.has(kind)) {
    const prompts = request.prompts;
    if (!prompts || prompts.length !== nItems || prompts.some((p) => !p)) {
      throw new MissingPrompts(`${kind} requires one prompt per prediction`);
    }
  }
  if (DISTRIBUTIONAL.has(kind) && (nItems < 2 || request.refItems.length < 2)) {
    throw new TooFewSamples(`${kind} needs at least 2 items per side`);
  }

  switch (kind) {
    case "dino": {
      const perItem = request.predItems.map((pred, i) =>
        meanOverFrames(request.refItems[i], pred, (a, b) =>
          cosine(backbones.image.embed(a), backbones.image.embed(b))
        )
      );
      return { kind, score: mean(perItem), perItem, backbones: backbones.ids };
    }
    case "lpips": {
      const perItem = request.predItems.map((pred, i) =>
        meanOverFrames(request.refItems[i], pred, (a, b) =>
          lpipsPair(backbones.image, a, b)
        )
      );
      return { kind, score: mean(perItem), perItem, backbones: backbones.ids };
    }
    case "clip_i2i": {
      const perItem = request.predItems.map((pred, i) =>
        meanOverFrames(request.refItems[i], pred, (a, b) =>
          100 * cosine(backbones.clipImage.embed(a), backbones.clipImage.embed(b))
        )
      );
      return { kind, score: mean(perItem), perItem, backbones: backbones.ids };
    }
    case "clip_t2i": {
      const prompts = request.prompts as string[];
      const perItem = request.predItems.map((pred, i) => {
        const text = embedText(prompts[i]);
        const scores = pred.map(
          (frame) => 100 * cosine(text, padTo(backbones.clipImage.embed(frame), text.length))
        );
        return mean(scores);
      });
      return { kind, score: mean(perItem), perItem, backbones: backbones.ids };
    }
    case "clip_v2v": {
      const perItem = request.predItems.map((pred, i) =>
        100 *
        cosine(
          videoEmbed(backbones.clipImage, request.refItems[i]),
          videoEmbed(backbones.clipImage, pred)
        )
      );
      return { kind, score: mean(perItem), perItem, backbones: backbones.ids };
    }
    case "clip_t2v": {
      const prompts = request.prompts as string[];
      const perItem = request.predItems.map((pred, i) => {
        const text = embedText(prompts[i]);
        const video = videoEmbed(backbones.clipImage, pred);
        return 100 * cosine(text, padTo(video, text.length));
      });
      return { kind, score: mean(perItem), perItem, backbones: backbones.ids };
    }
    case "fid":
    case "fid_clip": {
      const backbone = kind === "fid" ? backbones.inception : backbones.clipImage;
      const refFeatures = request.refItems.flat().map((img) => backbone.embed(img));
      const predFeatures = request.predItems.flat().map((img) => backbone.embed(img));
      const score = frechetDistance(moments(refFeatures), moments(predFeatures));
      return { kind, score, backbones: backbones.ids };
    }
    case "fvd": {
      const refFeatures = request.refItems.map((frames) =>
        videoEmbed(backbones.inception, frames)
      );
      const predFeatures = request.predItems.map((frames) =>
        videoEmbed(backbones.inception, frames)
      );
      const score = frechetDistance(moments(refFeatures), moments(predFeatures));
      return { kind, score, backbones: backbones.ids };
    }
  }
}

function mean(values: number[]): number {
  return values.reduce((a, b) => a + b, 0) / values.length;
}

/** Align embedding dimensionality by truncating or zero-padding. */
function padTo(vec: Float64Array, dim: number): Float64Array {
  if (vec.length === dim) {
    return vec;
  }
  const out = new Float64Array(dim);
  out.set(vec.subarray(0, Math.min(dim, vec.length)));
  return out;
}
