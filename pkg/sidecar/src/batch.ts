/** Batch scoring over a frame manifest, plus the merge into the primary report. */

import * as fs from "node:fs";
import * as path from "node:path";
import { loadImage, Image } from "./image";
import { FrameManifest, loadFrameManifest, SchemaMismatch } from "./manifest";
import {
  BackboneConfig,
  compute,
  backboneIds,
  DISTRIBUTIONAL,
  MetricKind,
  MetricResult,
} from "./metrics";

export interface BatchReport {
  task: string;
  domain: string;
  backbones: Record<string, string>;
  metrics: string[];
  aggregate: Record<string, number>;
  per_item: Record<string, Record<string, number>>;
  n_items: number;
}

export function runBatch(
  manifestPath: string,
  kinds: MetricKind[],
  config?: Partial<BackboneConfig>
): BatchReport {
  const manifest = loadFrameManifest(manifestPath);
  const report: BatchReport = {
    task: manifest.task,
    domain: manifest.domain,
    backbones: backboneIds(config),
    metrics: kinds,
    aggregate: {},
    per_item: {},
    n_items: manifest.items.length,
  };
  if (manifest.items.length === 0) {
    return report;
  }
  const refItems: Image[][] = manifest.items.map((it) => it.ref.map(loadImage));
  const predItems: Image[][] = manifest.items.map((it) => it.pred.map(loadImage));
  const prompts = manifest.items.map((it) => it.prompt);

  for (const item of manifest.items) {
    report.per_item[item.id] = {};
  }
  for (const kind of kinds) {
    const result: MetricResult = compute({
      kind,
      refItems,
      predItems,
      prompts,
      config,
    });
    report.aggregate[kind] = round6(result.score);
    if (!DISTRIBUTIONAL.has(kind) && result.perItem) {
      manifest.items.forEach((item, i) => {
        report.per_item[item.id][kind] = round6(result.perItem![i]);
      });
    }
  }
  return report;
}

function round6(v: number): number {
  return Math.round(v * 1e6) / 1e6;
}

export interface MergeOutcome {
  matched: number;
  unmatchedSidecar: string[];
  unmatchedPrimary: string[];
}

/**
 * Merge a sidecar report into the primary report directory: neural means
 * join aggregate.json under "neural", per-item scores join items.jsonl by
 * id.  Returns the alignment summary.
 */
export function mergeIntoAggregate(
  report: BatchReport,
  aggregatePath: string
): MergeOutcome {
  const aggregate = JSON.parse(fs.readFileSync(aggregatePath, "utf-8"));
  aggregate.neural = {
    backbones: report.backbones,
    metrics: report.aggregate,
  };

  const itemsPath = path.join(path.dirname(aggregatePath), "items.jsonl");
  const sidecarIds = new Set(Object.keys(report.per_item));
  const primaryIds = new Set<string>();
  const mergedLines: string[] = [];
  if (fs.existsSync(itemsPath)) {
    const lines = fs
      .readFileSync(itemsPath, "utf-8")
      .split("\n")
      .filter((l) => l.trim().length > 0);
    for (const line of lines) {
      const record = JSON.parse(line);
      primaryIds.add(record.id);
      const neural = report.per_item[record.id];
      if (neural && Object.keys(neural).length > 0) {
        record.scores = { ...record.scores, ...neural };
      }
      mergedLines.push(JSON.stringify(record));
    }
    fs.writeFileSync(itemsPath, mergedLines.join("\n") + "\n");
  }
  fs.writeFileSync(aggregatePath, JSON.stringify(aggregate, null, 1) + "\n");

  const unmatchedSidecar = [...sidecarIds].filter((id) => !primaryIds.has(id)).sort();
  const unmatchedPrimary = [...primaryIds].filter((id) => !sidecarIds.has(id)).sort();
  return {
    matched: [...sidecarIds].filter((id) => primaryIds.has(id)).length,
    unmatchedSidecar,
    unmatchedPrimary,
  };
}

export { SchemaMismatch };
