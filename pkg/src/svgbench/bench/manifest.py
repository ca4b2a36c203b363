"""Benchmark manifests: item schema, JSONL loading, validation."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

TASKS = (
    "mcq",
    "description",
    "edit",
    "text_to_svg",
    "image_to_svg",
    "text_to_sani",
    "video_to_sani",
)

DOMAINS = ("icon", "illustration", "chemistry", "animation")

_MCQ_ANSWERS = ("A", "B", "C", "D")

_ALLOWED_FIELDS = {"id", "task", "domain", "prompt", "reference", "media_paths"}


class ManifestError(ValueError):
    """Manifest violates the schema."""


class EmptyManifest(ValueError):
    pass


@dataclass
class EvalItem:
    id: str
    task: str
    domain: str
    prompt: str
    reference: str
    media_paths: Optional[dict] = None
    prediction: Optional[str] = None


@dataclass
class TaskManifest:
    task: str
    domain: str
    items: list[EvalItem] = field(default_factory=list)


def _validate_item(record: dict, lineno: int) -> EvalItem:
    extra = set(record) - _ALLOWED_FIELDS
    if extra:
        raise ManifestError(f"line {lineno}: unknown fields {sorted(extra)}")
    for required in ("id", "task", "domain", "prompt", "reference"):
        if required not in record:
            raise ManifestError(f"line {lineno}: missing field {required!r}")
    if record["task"] not in TASKS:
        raise ManifestError(
            f"line {lineno}: task {record['task']!r} not in {TASKS}"
        )
    if record["domain"] not in DOMAINS:
        raise ManifestError(
            f"line {lineno}: domain {record['domain']!r} not in {DOMAINS}"
        )
    if record["task"] == "mcq" and record["reference"] not in _MCQ_ANSWERS:
        raise ManifestError(
            f"line {lineno}: mcq reference must be one of {_MCQ_ANSWERS}"
        )
    media = record.get("media_paths")
    if media is not None and not isinstance(media, dict):
        raise ManifestError(f"line {lineno}: media_paths must be an object")
    return EvalItem(
        id=str(record["id"]),
        task=record["task"],
        domain=record["domain"],
        prompt=record["prompt"],
        reference=record["reference"],
        media_paths=media,
    )


def load_manifest(path, task: Optional[str] = None) -> TaskManifest:
    """Load and validate a JSONL manifest; all items must share one task
    and one domain (filterable by ``task``)."""
    items: list[EvalItem] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ManifestError(f"line {lineno}: bad JSON ({exc})") from exc
            if not isinstance(record, dict):
                raise ManifestError(f"line {lineno}: item must be an object")
            items.append(_validate_item(record, lineno))
    if task is not None:
        items = [it for it in items if it.task == task]
    if not items:
        raise EmptyManifest(f"no items{' for task ' + task if task else ''} in {path}")
    tasks = {it.task for it in items}
    domains = {it.domain for it in items}
    if len(tasks) > 1:
        raise ManifestError(f"manifest mixes tasks {sorted(tasks)}; pass --task")
    if len(domains) > 1:
        raise ManifestError(f"manifest mixes domains {sorted(domains)}")
    ids = [it.id for it in items]
    if len(set(ids)) != len(ids):
        dupes = sorted({i for i in ids if ids.count(i) > 1})
        raise ManifestError(f"duplicate item ids: {dupes[:5]}")
    return TaskManifest(task=items[0].task, domain=items[0].domain, items=items)


def load_predictions(path) -> dict[str, str]:
    """JSONL of {id, output} records."""
    out: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ManifestError(
                    f"predictions line {lineno}: bad JSON ({exc})"
                ) from exc
            if "id" not in record or "output" not in record:
                raise ManifestError(
                    f"predictions line {lineno}: need id and output fields"
                )
            out[str(record["id"])] = record["output"]
    return out


def attach_predictions(manifest: TaskManifest, predictions: dict[str, str]) -> None:
    for item in manifest.items:
        item.prediction = predictions.get(item.id)
