"""Benchmark manifests, scoring and reporting."""

from .manifest import (
    DOMAINS,
    EmptyManifest,
    EvalItem,
    ManifestError,
    TASKS,
    TaskManifest,
    attach_predictions,
    load_manifest,
    load_predictions,
)
from .report import write_report
from .scoring import (
    DuplicateKey,
    FrameCountMismatch,
    ItemResult,
    MetricReport,
    aggregate_report,
    count_tokens,
    count_tokens_base,
    extract_mcq_answer,
    format_table,
    score_animation,
    score_mcq,
    score_pixels,
)

__all__ = [
    "DOMAINS",
    "DuplicateKey",
    "EmptyManifest",
    "EvalItem",
    "FrameCountMismatch",
    "ItemResult",
    "ManifestError",
    "MetricReport",
    "TASKS",
    "TaskManifest",
    "aggregate_report",
    "attach_predictions",
    "count_tokens",
    "count_tokens_base",
    "extract_mcq_answer",
    "format_table",
    "load_manifest",
    "load_predictions",
    "score_animation",
    "score_mcq",
    "score_pixels",
    "write_report",
]
