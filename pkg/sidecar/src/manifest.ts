/** Frame-export manifest from the primary harness (report/frames/manifest.json). */

import * as fs from "node:fs";
import * as path from "node:path";

export class SchemaMismatch extends Error {}

export interface ManifestItem {
  id: string;
  prompt: string | null;
  ref: string[];
  pred: string[];
}

export interface FrameManifest {
  task: string;
  domain: string;
  size: number;
  nFrames: number;
  items: ManifestItem[];
  /** directory the manifest came from, for relative path resolution */
  baseDir: string;
}

export function loadFrameManifest(manifestPath: string): FrameManifest {
  let parsed: unknown;
  try {
    parsed = JSON.parse(fs.readFileSync(manifestPath, "utf-8"));
  } catch (err) {
    throw new SchemaMismatch(`cannot read manifest ${manifestPath}: ${err}`);
  }
  const obj = parsed as Record<string, unknown>;
  if (!obj || !Array.isArray(obj.items)) {
    throw new SchemaMismatch(`manifest ${manifestPath} has no items array`);
  }
  const baseDir = path.dirname(path.resolve(manifestPath));
  const items: ManifestItem[] = [];
  for (const [index, raw] of (obj.items as unknown[]).entries()) {
    const item = raw as Record<string, unknown>;
    if (typeof item.id !== "string") {
      throw new SchemaMismatch(`item ${index}: missing string id`);
    }
    const ref = item.ref;
    const pred = item.pred;
    if (!Array.isArray(ref) || !Array.isArray(pred) || ref.length === 0 || pred.length === 0) {
      throw new SchemaMismatch(`item ${item.id}: ref/pred must be non-empty path lists`);
    }
    items.push({
      id: item.id,
      prompt: typeof item.prompt === "string" ? item.prompt : null,
      ref: ref.map((p) => resolveFramePath(String(p), baseDir)),
      pred: pred.map((p) => resolveFramePath(String(p), baseDir)),
    });
  }
  return {
    task: typeof obj.task === "string" ? obj.task : "unknown",
    domain: typeof obj.domain === "string" ? obj.domain : "unknown",
    size: typeof obj.size === "number" ? obj.size : 0,
    nFrames: typeof obj.n_frames === "number" ? obj.n_frames : 1,
    items,
    baseDir,
  };
}

/**
 * The primary records paths as given at its own invocation, so try them
 * as-is, then relative to the manifest directory, then relative to the
 * report root two levels up.
 */
function resolveFramePath(p: string, baseDir: string): string {
  const candidates = path.isAbsolute(p)
    ? [p]
    : [
        p,
        path.join(baseDir, p),
        path.join(baseDir, path.basename(path.dirname(p)), path.basename(p)),
        path.join(baseDir, "..", "..", p),
      ];
  for (const candidate of candidates) {
    if (fs.existsSync(candidate)) {
      return path.resolve(candidate);
    }
  }
  throw new SchemaMismatch(`frame file not found: ${p}`);
}
