import { describe, expect, it } from "vitest";
import { frechetDistance, moments, symmetricEigenvalues } from "../src/stats";
import { mulberry32 } from "../src/rng";

function gaussianCloud(n: number, dim: number, seed: number, shift = 0): Float64Array[] {
  const rand = mulberry32(seed);
  const out: Float64Array[] = [];
  for (let i = 0; i < n; i++) {
    const v = new Float64Array(dim);
    for (let d = 0; d < dim; d++) {
      const u = Math.max(rand(), 1e-12);
      const w = rand();
      v[d] = Math.sqrt(-2 * Math.log(u)) * Math.cos(2 * Math.PI * w) + shift;
    }
    out.push(v);
  }
  return out;
}

describe("eigenvalues", () => {
  it("recovers a known diagonal", () => {
    const m = Float64Array.from([3, 0, 0, 0, 2, 0, 0, 0, 1]);
    const { values } = symmetricEigenvalues(m, 3);
    const sorted = [...values].sort((a, b) => b - a);
    expect(sorted[0]).toBeCloseTo(3, 10);
    expect(sorted[1]).toBeCloseTo(2, 10);
    expect(sorted[2]).toBeCloseTo(1, 10);
  });

  it("recovers a rotated pair", () => {
    // [[2, 1], [1, 2]] has eigenvalues 3 and 1
    const m = Float64Array.from([2, 1, 1, 2]);
    const { values } = symmetricEigenvalues(m, 2);
    const sorted = [...values].sort((a, b) => b - a);
    expect(sorted[0]).toBeCloseTo(3, 10);
    expect(sorted[1]).toBeCloseTo(1, 10);
  });
});

describe("frechet distance", () => {
  it("zero for identical moments", () => {
    const cloud = gaussianCloud(64, 8, 11);
    const m = moments(cloud);
    expect(frechetDistance(m, m)).toBeLessThanOrEqual(1e-6);
  });

  it("mean shift contributes |delta mu|^2", () => {
    // equal covariance, shifted mean: FID = dim * shift^2 in expectation
    const a = gaussianCloud(4000, 4, 3);
    const b = a.map((v) => Float64Array.from(v, (x) => x + 1));
    const fid = frechetDistance(moments(a), moments(b));
    expect(fid).toBeCloseTo(4, 5); // same cov cancels exactly on shifted copies
  });

  it("diagonal covariance case matches the closed form", () => {
    // N(0, I) vs N(0, 4I): tr(I + 4I - 2*sqrt(4I)) = dim * (5 - 4) = dim
    const dim = 3;
    const a = gaussianCloud(3000, dim, 17);
    const b = gaussianCloud(3000, dim, 29).map((v) =>
      Float64Array.from(v, (x) => 2 * x)
    );
    const fid = frechetDistance(moments(a), moments(b));
    expect(fid).toBeGreaterThan(dim * 0.7);
    expect(fid).toBeLessThan(dim * 1.3);
  });

  it("symmetric in its arguments", () => {
    const a = moments(gaussianCloud(64, 6, 5));
    const b = moments(gaussianCloud(64, 6, 6, 0.5));
    expect(frechetDistance(a, b)).toBeCloseTo(frechetDistance(b, a), 8);
  });
});
