"""Scoring: MCQ accuracy, pixel metrics with the penalty rule, animation
frame averaging, token statistics and report aggregation."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from ..core.parser import MalformedXml, NotSvg, parse_svg
from ..metrics import (
    RasterImage,
    RenderOutcome,
    mse,
    psnr,
    rasterize,
    rasterize_animation,
    rasterize_animation_text,
    rasterize_text,
    ssim,
)
from ..render.animate import resolve_duration
from ..render.png import read_png, write_png
from ..tokenizer import SvgTokenizer
from .manifest import EmptyManifest, EvalItem

# first standalone option letter, optional trailing period
_MCQ_LETTER_RE = re.compile(r"\b([ABCD])\.?")

_PIXEL_METRICS = {"ssim": ssim, "psnr": psnr, "mse": mse}


class FrameCountMismatch(ValueError):
    pass


class DuplicateKey(ValueError):
    pass


@dataclass
class ItemResult:
    id: str
    renderable: bool
    scores: dict[str, float]


@dataclass
class MetricReport:
    task: str
    domain: str
    per_item: list[ItemResult]
    aggregate: dict[str, float]
    token_stats: dict[str, float] = field(default_factory=dict)

    @property
    def n_items(self) -> int:
        return len(self.per_item)


def _aggregate(per_item: list[ItemResult]) -> dict[str, float]:
    if not per_item:
        return {}
    keys = per_item[0].scores.keys()
    return {
        k: float(np.mean([r.scores[k] for r in per_item])) for k in keys
    }


# ---------------------------------------------------------------------------
# understanding
# ---------------------------------------------------------------------------

def extract_mcq_answer(prediction: Optional[str]) -> Optional[str]:
    if prediction is None:
        return None
    m = _MCQ_LETTER_RE.search(prediction.strip())
    return m.group(1) if m else None


def score_mcq(items: list[EvalItem], domain: str = "icon") -> MetricReport:
    """Accuracy in [0, 100]; unparsable predictions count as wrong."""
    if not items:
        raise EmptyManifest("no mcq items")
    per_item = []
    for item in items:
        answer = extract_mcq_answer(item.prediction)
        correct = answer == item.reference
        per_item.append(
            ItemResult(item.id, renderable=True, scores={"accuracy": 100.0 * correct})
        )
    return MetricReport(
        task="mcq",
        domain=domain,
        per_item=per_item,
        aggregate=_aggregate(per_item),
    )


# ---------------------------------------------------------------------------
# pixel tasks (edit / text_to_svg / image_to_svg)
# ---------------------------------------------------------------------------

def _reference_render(item: EvalItem, size: int) -> RenderOutcome:
    if item.media_paths and "reference_image" in item.media_paths:
        pixels = read_png(item.media_paths["reference_image"])
        if pixels.shape[2] == 4:
            pixels = pixels[..., :3]
        return RenderOutcome.ok(RasterImage(np.ascontiguousarray(pixels)))
    outcome = rasterize_text(item.reference, size)
    if outcome.penalized:
        raise ValueError(f"reference for item {item.id!r} does not render")
    return outcome


def score_pixels(
    items: list[EvalItem],
    task: str,
    domain: str = "icon",
    metrics: tuple[str, ...] = ("ssim", "psnr"),
    size: int = 512,
    export_dir: Optional[Path] = None,
) -> MetricReport:
    """Render prediction vs reference (penalty applied) and average the
    requested pixel metrics.  Penalized items stay in the report."""
    if not items:
        raise EmptyManifest(f"no {task} items")
    per_item = []
    exports = []
    for item in items:
        ref = _reference_render(item, size)
        pred = (
            rasterize_text(item.prediction, size)
            if item.prediction is not None
            else RenderOutcome.penalty(size)
        )
        scores = {m: float(_PIXEL_METRICS[m](ref.image, pred.image)) for m in metrics}
        per_item.append(ItemResult(item.id, renderable=not pred.penalized, scores=scores))
        if export_dir is not None:
            item_dir = Path(export_dir) / item.id
            item_dir.mkdir(parents=True, exist_ok=True)
            ref_path = item_dir / "ref_0.png"
            pred_path = item_dir / "pred_0.png"
            write_png(ref_path, ref.image.data)
            write_png(pred_path, pred.image.data)
            exports.append(
                {
                    "id": item.id,
                    "prompt": item.prompt,
                    "ref": [str(ref_path)],
                    "pred": [str(pred_path)],
                }
            )
    report = MetricReport(
        task=task, domain=domain, per_item=per_item, aggregate=_aggregate(per_item)
    )
    report.exports = exports  # type: ignore[attr-defined]
    return report


# ---------------------------------------------------------------------------
# animation tasks
# ---------------------------------------------------------------------------

def _reference_frames(
    item: EvalItem, size: int, n_frames: int
) -> tuple[list[RenderOutcome], Optional[float]]:
    if item.media_paths and "reference_frames" in item.media_paths:
        paths = item.media_paths["reference_frames"]
        if len(paths) != n_frames:
            raise FrameCountMismatch(
                f"item {item.id!r}: {len(paths)} reference frames, need {n_frames}"
            )
        frames = []
        for p in paths:
            pixels = read_png(p)
            if pixels.shape[2] == 4:
                pixels = pixels[..., :3]
            frames.append(RenderOutcome.ok(RasterImage(np.ascontiguousarray(pixels))))
        return frames, None
    try:
        doc = parse_svg(item.reference)
    except (MalformedXml, NotSvg) as exc:
        raise ValueError(f"reference for item {item.id!r} does not parse") from exc
    duration = resolve_duration(doc)
    frames = rasterize_animation(doc, size, n_frames, duration)
    if any(f.penalized for f in frames):
        raise ValueError(f"reference animation for item {item.id!r} does not render")
    return frames, duration


def score_animation(
    items: list[EvalItem],
    domain: str = "animation",
    n_frames: int = 8,
    metrics: tuple[str, ...] = ("ssim", "psnr"),
    size: int = 512,
    export_dir: Optional[Path] = None,
) -> MetricReport:
    """Sample both sides at aligned timestamps, average metrics per item
    across frames, then across items."""
    if not items:
        raise EmptyManifest("no animation items")
    per_item = []
    exports = []
    for item in items:
        ref_frames, duration = _reference_frames(item, size, n_frames)
        if item.prediction is None:
            pred_frames = [RenderOutcome.penalty(size) for _ in range(n_frames)]
        else:
            pred_frames = rasterize_animation_text(
                item.prediction, size, n_frames, duration
            )
        scores = {}
        for m in metrics:
            fn = _PIXEL_METRICS[m]
            scores[m] = float(
                np.mean(
                    [fn(r.image, p.image) for r, p in zip(ref_frames, pred_frames)]
                )
            )
        renderable = not any(p.penalized for p in pred_frames)
        per_item.append(ItemResult(item.id, renderable=renderable, scores=scores))
        if export_dir is not None:
            item_dir = Path(export_dir) / item.id
            item_dir.mkdir(parents=True, exist_ok=True)
            ref_paths, pred_paths = [], []
            for k, (r, p) in enumerate(zip(ref_frames, pred_frames)):
                rp = item_dir / f"ref_{k}.png"
                pp = item_dir / f"pred_{k}.png"
                write_png(rp, r.image.data)
                write_png(pp, p.image.data)
                ref_paths.append(str(rp))
                pred_paths.append(str(pp))
            exports.append(
                {
                    "id": item.id,
                    "prompt": item.prompt,
                    "ref": ref_paths,
                    "pred": pred_paths,
                }
            )
    report = MetricReport(
        task=items[0].task,
        domain=domain,
        per_item=per_item,
        aggregate=_aggregate(per_item),
    )
    report.exports = exports  # type: ignore[attr-defined]
    return report


# ---------------------------------------------------------------------------
# tokens + aggregation
# ---------------------------------------------------------------------------

def count_tokens(predictions: list[str], tokenizer: SvgTokenizer) -> float:
    """Mean special-augmented token count."""
    if not predictions:
        return 0.0
    return float(np.mean([tokenizer.count(p) for p in predictions]))


def count_tokens_base(predictions: list[str], tokenizer: SvgTokenizer) -> float:
    if not predictions:
        return 0.0
    return float(np.mean([tokenizer.count_base_only(p) for p in predictions]))


_DOMAIN_ORDER = {d: i for i, d in enumerate(("icon", "illustration", "chemistry", "animation"))}
_TASK_ORDER = {t: i for i, t in enumerate(
    ("mcq", "description", "edit", "text_to_svg", "image_to_svg", "text_to_sani", "video_to_sani")
)}


def aggregate_report(reports: list[MetricReport]) -> dict:
    """Deterministic multi-report table grouped by domain (fixed order)."""
    seen = set()
    for r in reports:
        key = (r.task, r.domain)
        if key in seen:
            raise DuplicateKey(f"duplicate report for {key}")
        seen.add(key)
    ordered = sorted(
        reports,
        key=lambda r: (_DOMAIN_ORDER.get(r.domain, 99), _TASK_ORDER.get(r.task, 99)),
    )
    rows = []
    for r in ordered:
        row = {
            "domain": r.domain,
            "task": r.task,
            "n_items": r.n_items,
            "metrics": {k: round(v, 6) for k, v in sorted(r.aggregate.items())},
        }
        if r.token_stats:
            row["tokens"] = {k: round(v, 2) for k, v in sorted(r.token_stats.items())}
        rows.append(row)
    return {"rows": rows}


def format_table(aggregate: dict) -> str:
    """Aligned text rendering of aggregate_report output."""
    lines = []
    header = f"{'domain':<13} {'task':<14} {'n':>5}  metrics"
    lines.append(header)
    lines.append("-" * len(header))
    for row in aggregate["rows"]:
        metrics = "  ".join(f"{k}={v:.3f}" for k, v in row["metrics"].items())
        if "tokens" in row:
            metrics += "  " + "  ".join(
                f"{k}={v:.1f}" for k, v in row["tokens"].items()
            )
        lines.append(
            f"{row['domain']:<13} {row['task']:<14} {row['n_items']:>5}  {metrics}"
        )
    return "\n".join(lines) + "\n"
