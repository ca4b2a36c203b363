import { describe, expect, it } from "vitest";
import { mulberry32 } from "../src/rng";
import { compute, MissingPrompts, TooFewSamples } from "../src/metrics";
import { BackboneLoadFailure, loadBackbone } from "../src/backbone";
import { Image } from "../src/image";

function randomImage(seed: number, side = 48): Image {
  const rand = mulberry32(seed);
  const data = new Float64Array(side * side * 3);
  for (let i = 0; i < data.length; i++) {
    data[i] = rand();
  }
  return { width: side, height: side, data };
}

const set16 = Array.from({ length: 16 }, (_, i) => [randomImage(1000 + i)]);
const single = [[randomImage(42)]];

describe("self-identity contracts", () => {
  it("dino(x, x) = 1.0 within 1e-4", () => {
    const result = compute({ kind: "dino", refItems: single, predItems: single });
    expect(Math.abs(result.score - 1.0)).toBeLessThanOrEqual(1e-4);
  });

  it("lpips(x, x) <= 1e-6", () => {
    const result = compute({ kind: "lpips", refItems: single, predItems: single });
    expect(result.score).toBeLessThanOrEqual(1e-6);
  });

  it("fid(X, X) <= 1e-3 on a 16-image set", () => {
    const result = compute({ kind: "fid", refItems: set16, predItems: set16 });
    expect(result.score).toBeLessThanOrEqual(1e-3);
  });

  it("fid_clip(X, X) <= 1e-3", () => {
    const result = compute({ kind: "fid_clip", refItems: set16, predItems: set16 });
    expect(result.score).toBeLessThanOrEqual(1e-3);
  });

  it("clip_i2i(x, x) = 100.0 within 0.1 on the x100 scale", () => {
    const result = compute({ kind: "clip_i2i", refItems: single, predItems: single });
    expect(Math.abs(result.score - 100.0)).toBeLessThanOrEqual(0.1);
  });

  it("fvd(X, X) ~ 0 over 4-frame videos", () => {
    const videos = Array.from({ length: 8 }, (_, i) =>
      Array.from({ length: 4 }, (_, k) => randomImage(i * 10 + k))
    );
    const result = compute({ kind: "fvd", refItems: videos, predItems: videos });
    expect(result.score).toBeLessThanOrEqual(1e-3);
  });

  it("clip_v2v(x, x) = 100.0 within 0.1", () => {
    const video = [Array.from({ length: 4 }, (_, k) => randomImage(900 + k))];
    const result = compute({ kind: "clip_v2v", refItems: video, predItems: video });
    expect(Math.abs(result.score - 100.0)).toBeLessThanOrEqual(0.1);
  });
});

describe("discrimination and determinism", () => {
  it("differing images score below the optimum", () => {
    const a = [[randomImage(1)]];
    const b = [[randomImage(2)]];
    expect(compute({ kind: "dino", refItems: a, predItems: b }).score).toBeLessThan(1.0);
    expect(compute({ kind: "lpips", refItems: a, predItems: b }).score).toBeGreaterThan(1e-6);
  });

  it("fid grows between disjoint distributions", () => {
    const brighter = set16.map(([img], i) => {
      const data = Float64Array.from(img.data, (v) => Math.min(v * 0.2 + 0.8, 1));
      return [{ ...img, data }];
    });
    const score = compute({ kind: "fid", refItems: set16, predItems: brighter }).score;
    expect(score).toBeGreaterThan(0.01);
  });

  it("repeated runs give identical scores", () => {
    const a = [[randomImage(7)], [randomImage(8)]];
    const b = [[randomImage(9)], [randomImage(10)]];
    const first = compute({ kind: "dino", refItems: a, predItems: b }).score;
    const second = compute({ kind: "dino", refItems: a, predItems: b }).score;
    expect(first).toBe(second);
  });

  it("reports carry the backbone identifiers", () => {
    const result = compute({ kind: "dino", refItems: single, predItems: single });
    expect(result.backbones.image).toBe("rpp-image-v1");
    expect(result.backbones.clip_text).toBeDefined();
  });
});

describe("error surfaces", () => {
  it("clip_t2i without prompts raises MissingPrompts", () => {
    expect(() =>
      compute({ kind: "clip_t2i", refItems: single, predItems: single })
    ).toThrow(MissingPrompts);
  });

  it("clip_t2i with prompts succeeds on the x100 scale", () => {
    const result = compute({
      kind: "clip_t2i",
      refItems: single,
      predItems: single,
      prompts: ["a red circle"],
    });
    expect(result.score).toBeGreaterThanOrEqual(-100);
    expect(result.score).toBeLessThanOrEqual(100);
  });

  it("fid with one sample raises TooFewSamples", () => {
    expect(() =>
      compute({ kind: "fid", refItems: single, predItems: single })
    ).toThrow(TooFewSamples);
  });

  it("unknown backbone raises BackboneLoadFailure", () => {
    expect(() => loadBackbone("resnet-900-quantum")).toThrow(BackboneLoadFailure);
    expect(() =>
      compute({
        kind: "dino",
        refItems: single,
        predItems: single,
        config: { image: "nope" },
      })
    ).toThrow(BackboneLoadFailure);
  });
});
