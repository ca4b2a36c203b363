#!/usr/bin/env node
/**
 * neural-metrics --manifest report/frames/manifest.json \
 *     --metrics dino,lpips,fid --out neural.json [--merge aggregate.json]
 */

import * as fs from "node:fs";
import { parseArgs } from "node:util";
import { mergeIntoAggregate, runBatch, SchemaMismatch } from "./batch";
import { BackboneLoadFailure } from "./backbone";
import { METRIC_KINDS, MetricKind, MissingPrompts, TooFewSamples } from "./metrics";

function main(): number {
  const { values } = parseArgs({
    options: {
      manifest: { type: "string" },
      metrics: { type: "string", default: "dino,lpips" },
      out: { type: "string" },
      merge: { type: "string" },
      "image-backbone": { type: "string" },
      "clip-backbone": { type: "string" },
      "inception-backbone": { type: "string" },
    },
  });
  if (!values.manifest || !values.out) {
    console.error(
      "usage: neural-metrics --manifest frames/manifest.json " +
        "--metrics dino,lpips,fid --out neural.json [--merge aggregate.json]"
    );
    return 2;
  }
  const kinds = (values.metrics as string)
    .split(",")
    .map((k) => k.trim())
    .filter((k) => k.length > 0);
  for (const kind of kinds) {
    if (!METRIC_KINDS.includes(kind as MetricKind)) {
      console.error(`unknown metric ${kind}; known: ${METRIC_KINDS.join(", ")}`);
      return 2;
    }
  }
  const config: Record<string, string> = {};
  if (values["image-backbone"]) config.image = values["image-backbone"] as string;
  if (values["clip-backbone"]) config.clipImage = values["clip-backbone"] as string;
  if (values["inception-backbone"]) {
    config.inception = values["inception-backbone"] as string;
  }

  try {
    const report = runBatch(values.manifest as string, kinds as MetricKind[], config);
    fs.writeFileSync(values.out as string, JSON.stringify(report, null, 1) + "\n");
    if (values.merge) {
      const outcome = mergeIntoAggregate(report, values.merge as string);
      console.log(
        JSON.stringify({
          merged_into: values.merge,
          matched: outcome.matched,
          unmatched_sidecar: outcome.unmatchedSidecar.length,
          unmatched_primary: outcome.unmatchedPrimary.length,
        })
      );
    } else {
      console.log(
        JSON.stringify({ out: values.out, n_items: report.n_items, metrics: report.aggregate })
      );
    }
    return 0;
  } catch (err) {
    if (
      err instanceof SchemaMismatch ||
      err instanceof MissingPrompts ||
      err instanceof TooFewSamples ||
      err instanceof BackboneLoadFailure
    ) {
      console.error(`${err.constructor.name}: ${err.message}`);
      return 2;
    }
    throw err;
  }
}

process.exitCode = main();
