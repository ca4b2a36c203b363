export { Backbone, BackboneLoadFailure, cosine, loadBackbone } from "./backbone";
export { BatchReport, mergeIntoAggregate, runBatch } from "./batch";
export { Image, loadImage, resize } from "./image";
export { FrameManifest, loadFrameManifest, SchemaMismatch } from "./manifest";
export {
  BackboneConfig,
  compute,
  DISTRIBUTIONAL,
  METRIC_KINDS,
  MetricKind,
  MetricRequest,
  MetricResult,
  MissingPrompts,
  NEEDS_PROMPTS,
  TooFewSamples,
} from "./metrics";
export { decodePng, encodePng, RawImage } from "./png";
export { frechetDistance, moments, symmetricEigenvalues } from "./stats";
export { embedText, TEXT_BACKBONE_ID } from "./textembed";
