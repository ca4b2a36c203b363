import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";
import { describe, expect, it } from "vitest";
import { encodePng, decodePng } from "../src/png";
import { loadImage } from "../src/image";
import { mergeIntoAggregate, runBatch } from "../src/batch";
import { SchemaMismatch, loadFrameManifest } from "../src/manifest";
import { mulberry32 } from "../src/rng";

function writePng(dir: string, name: string, seed: number, side = 24): string {
  const rand = mulberry32(seed);
  const data = new Uint8Array(side * side * 3);
  for (let i = 0; i < data.length; i++) {
    data[i] = Math.floor(rand() * 256);
  }
  const file = path.join(dir, name);
  fs.writeFileSync(file, encodePng({ width: side, height: side, channels: 3, data }));
  return file;
}

function makeExport(nItems: number, identical = true): { dir: string; manifest: string } {
  const dir = fs.mkdtempSync(path.join(os.tmpdir(), "nm-"));
  const framesDir = path.join(dir, "frames");
  fs.mkdirSync(framesDir);
  const items = [];
  for (let i = 0; i < nItems; i++) {
    const itemDir = path.join(framesDir, `item${i}`);
    fs.mkdirSync(itemDir);
    const ref = writePng(itemDir, "ref_0.png", 100 + i);
    const pred = identical
      ? (fs.copyFileSync(ref, path.join(itemDir, "pred_0.png")),
        path.join(itemDir, "pred_0.png"))
      : writePng(itemDir, "pred_0.png", 500 + i);
    items.push({ id: `item${i}`, prompt: `prompt ${i}`, ref: [ref], pred: [pred] });
  }
  const manifest = path.join(framesDir, "manifest.json");
  fs.writeFileSync(
    manifest,
    JSON.stringify({ task: "edit", domain: "icon", size: 24, n_frames: 1, items })
  );
  return { dir, manifest };
}

describe("png codec", () => {
  it("round-trips", () => {
    const rand = mulberry32(3);
    const data = new Uint8Array(8 * 8 * 3);
    for (let i = 0; i < data.length; i++) data[i] = Math.floor(rand() * 256);
    const decoded = decodePng(encodePng({ width: 8, height: 8, channels: 3, data }));
    expect(Buffer.from(decoded.data).equals(Buffer.from(data))).toBe(true);
  });
});

describe("batch over a frame manifest", () => {
  it("identical pairs score dino 1 and lpips 0", () => {
    const { manifest } = makeExport(3);
    const report = runBatch(manifest, ["dino", "lpips"]);
    expect(report.n_items).toBe(3);
    expect(Math.abs(report.aggregate.dino - 1.0)).toBeLessThanOrEqual(1e-4);
    expect(report.aggregate.lpips).toBeLessThanOrEqual(1e-6);
    expect(report.per_item.item0.dino).toBeDefined();
    expect(report.backbones.image).toBe("rpp-image-v1");
  });

  it("distributional metrics land in aggregate only", () => {
    const { manifest } = makeExport(4);
    const report = runBatch(manifest, ["fid"]);
    expect(report.aggregate.fid).toBeLessThanOrEqual(1e-3);
    expect(report.per_item.item0.fid).toBeUndefined();
  });

  it("empty manifest gives an empty report", () => {
    const dir = fs.mkdtempSync(path.join(os.tmpdir(), "nm-"));
    const manifest = path.join(dir, "manifest.json");
    fs.writeFileSync(
      manifest,
      JSON.stringify({ task: "edit", domain: "icon", size: 24, n_frames: 1, items: [] })
    );
    const report = runBatch(manifest, ["dino"]);
    expect(report.n_items).toBe(0);
    expect(report.aggregate).toEqual({});
  });

  it("missing frame file raises SchemaMismatch naming the path", () => {
    const { manifest } = makeExport(1);
    const parsed = JSON.parse(fs.readFileSync(manifest, "utf-8"));
    parsed.items[0].pred = ["/nowhere/ghost.png"];
    fs.writeFileSync(manifest, JSON.stringify(parsed));
    expect(() => loadFrameManifest(manifest)).toThrow(/ghost\.png/);
    expect(() => loadFrameManifest(manifest)).toThrow(SchemaMismatch);
  });

  it("malformed manifest raises SchemaMismatch", () => {
    const dir = fs.mkdtempSync(path.join(os.tmpdir(), "nm-"));
    const manifest = path.join(dir, "manifest.json");
    fs.writeFileSync(manifest, JSON.stringify({ nope: true }));
    expect(() => loadFrameManifest(manifest)).toThrow(SchemaMismatch);
  });
});

describe("merge contract", () => {
  it("aligns 50 items with zero unmatched ids", () => {
    const { dir, manifest } = makeExport(50);
    // primary-side report files
    const aggregatePath = path.join(dir, "aggregate.json");
    fs.writeFileSync(
      aggregatePath,
      JSON.stringify({ task: "edit", domain: "icon", metrics: { ssim: 1.0 } })
    );
    const itemsPath = path.join(dir, "items.jsonl");
    const lines = Array.from({ length: 50 }, (_, i) =>
      JSON.stringify({ id: `item${i}`, renderable: true, scores: { ssim: 1.0 } })
    );
    fs.writeFileSync(itemsPath, lines.join("\n") + "\n");

    const report = runBatch(manifest, ["dino", "lpips"]);
    const outcome = mergeIntoAggregate(report, aggregatePath);
    expect(outcome.matched).toBe(50);
    expect(outcome.unmatchedSidecar).toEqual([]);
    expect(outcome.unmatchedPrimary).toEqual([]);

    const merged = JSON.parse(fs.readFileSync(aggregatePath, "utf-8"));
    expect(merged.neural.metrics.dino).toBeDefined();
    expect(merged.neural.backbones.image).toBe("rpp-image-v1");
    const mergedItems = fs
      .readFileSync(itemsPath, "utf-8")
      .trim()
      .split("\n")
      .map((l) => JSON.parse(l));
    expect(mergedItems).toHaveLength(50);
    for (const item of mergedItems) {
      expect(item.scores.dino).toBeDefined();
      expect(item.scores.lpips).toBeDefined();
      expect(item.scores.ssim).toBe(1.0);
    }
  });
});
