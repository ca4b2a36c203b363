"""Report directory writer: aggregate.json, items.jsonl, frame exports."""

from __future__ import annotations

import json
from pathlib import Path

from .scoring import MetricReport


def _stable_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, indent=1) + "\n"


def write_report(report: MetricReport, out_dir, size: int, n_frames: int = 1) -> None:
    """Layout: aggregate.json, items.jsonl, frames/<id>/{ref,pred}_{k}.png
    plus frames/manifest.json for the neural-metrics sidecar."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    aggregate = {
        "task": report.task,
        "domain": report.domain,
        "n_items": report.n_items,
        "metrics": {k: round(v, 6) for k, v in sorted(report.aggregate.items())},
        "token_stats": {k: round(v, 3) for k, v in sorted(report.token_stats.items())},
        "render": {"size": size, "frames": n_frames},
        "items": {
            "total": report.n_items,
            "renderable": sum(1 for r in report.per_item if r.renderable),
            "penalized": sum(1 for r in report.per_item if not r.renderable),
        },
    }
    (out / "aggregate.json").write_text(_stable_json(aggregate), encoding="utf-8")

    with open(out / "items.jsonl", "w", encoding="utf-8") as fh:
        for item in report.per_item:
            fh.write(
                json.dumps(
                    {
                        "id": item.id,
                        "renderable": item.renderable,
                        "scores": {k: round(v, 6) for k, v in sorted(item.scores.items())},
                    },
                    sort_keys=True,
                    ensure_ascii=False,
                )
                + "\n"
            )

    exports = getattr(report, "exports", None)
    if exports:
        frames_dir = out / "frames"
        frames_dir.mkdir(exist_ok=True)
        manifest = {
            "task": report.task,
            "domain": report.domain,
            "size": size,
            "n_frames": n_frames,
            "items": exports,
        }
        (frames_dir / "manifest.json").write_text(
            _stable_json(manifest), encoding="utf-8"
        )
