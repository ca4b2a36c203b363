"""Paired editing-sample synthesis: eight deterministic low-level edits.

Geometric edits wrap the canvas content in a transform group pivoted at the
canvas center rather than rewriting coordinates; color edits rewrite paint
attributes in place; cropping re-windows the viewBox onto a half-region and
re-normalizes.  Instructions come from the fixed template pools with
parameters appended in a fixed phrasing, so identical seeds give identical
samples.
"""

from __future__ import annotations

import json
import logging
import random
from dataclasses import dataclass, field
from typing import Optional

from . import templates
from .core.colors import Color
from .core.model import (
    ANIMATION_TAGS,
    AttrValue,
    COMMENT_TAG,
    SHAPE_TAGS,
    SvgDocument,
    SvgElement,
)
from .core.serializer import format_number, serialize_svg
from .metrics import validate_renderable
from .normalize import NormalizeConfig, normalize_viewbox, quantize_numbers

log = logging.getLogger(__name__)

EDIT_KINDS = (
    "color_edit",
    "add_stroke",
    "translate",
    "scale",
    "rotate",
    "flip",
    "transparency",
    "crop",
)

CROP_REGIONS = ("left-half", "right-half", "top-half", "bottom-half")

_TEMPLATE_POOLS = {
    "add_stroke": templates.ADD_STROKE_TEMPLATES,
    "translate": templates.TRANSLATE_TEMPLATES,
    "scale": templates.SCALE_TEMPLATES,
    "rotate": templates.ROTATE_TEMPLATES,
    "flip": templates.FLIP_TEMPLATES,
    "transparency": templates.TRANSPARENCY_TEMPLATES,
    "crop": templates.CROP_TEMPLATES,
}

CANVAS = 128.0
CENTER = CANVAS / 2.0


class ColorNotFound(ValueError):
    """The color-edit source color does not occur in the document."""


class NoShapes(ValueError):
    """Stroke addition needs at least one shape element."""


@dataclass(frozen=True)
class EditOp:
    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in EDIT_KINDS:
            raise ValueError(f"unknown edit kind {self.kind!r}")
        p = self.params
        if self.kind == "scale" and p.get("factor", 1.0) <= 0:
            raise ValueError("scale factor must be positive")
        if self.kind == "rotate" and not -360.0 < p.get("degrees", 0.0) < 360.0:
            raise ValueError("rotation must lie in (-360, 360)")
        if self.kind == "flip" and p.get("axis") not in ("horizontal", "vertical"):
            raise ValueError("flip axis must be horizontal or vertical")
        if self.kind == "transparency" and not 0.0 <= p.get("opacity", 1.0) <= 1.0:
            raise ValueError("opacity must lie in [0, 1]")
        if self.kind == "crop" and p.get("region") not in CROP_REGIONS:
            raise ValueError(f"crop region must be one of {CROP_REGIONS}")


@dataclass
class EditSample:
    original: SvgDocument
    instruction: str
    edited: SvgDocument
    op: EditOp
    seed: int


# ---------------------------------------------------------------------------
# transforms
# ---------------------------------------------------------------------------

def _wrap_in_group(doc: SvgDocument, attrs: list[tuple[str, str]]) -> SvgDocument:
    """New document whose drawable root children move under one group."""
    out = doc.clone()
    root = out.root
    keep: list[SvgElement] = []
    wrap: list[SvgElement] = []
    for child in root.children:
        if child.tag in ("defs", "metadata", "title", "desc", "style", COMMENT_TAG):
            keep.append(child)
        else:
            wrap.append(child)
    group = SvgElement(tag="g")
    for name, raw in attrs:
        group.set_raw(name, raw)
    group.children = wrap
    root.children = keep + [group]
    return out


def _fmt(v: float) -> str:
    return format_number(v, 2)


def apply_edit(doc: SvgDocument, op: EditOp) -> SvgDocument:
    """Apply one edit to a canonical (128x128) document."""
    kind, p = op.kind, op.params

    if kind == "color_edit":
        return _apply_color_edit(doc, p["from_hex"], p["to_hex"])

    if kind == "add_stroke":
        return _apply_add_stroke(doc, p.get("color", "#000000"), p.get("width", 2.0))

    if kind == "translate":
        dx, dy = p.get("dx", 0.0), p.get("dy", 0.0)
        return _wrap_in_group(
            doc, [("transform", f"translate({_fmt(dx)} {_fmt(dy)})")]
        )

    if kind == "scale":
        k = p.get("factor", 1.0)
        # pivot at canvas center: translate(c c) scale(k) translate(-c -c)
        e = CENTER * (1.0 - k)
        return _wrap_in_group(
            doc,
            [("transform", f"matrix({_fmt(k)} 0 0 {_fmt(k)} {_fmt(e)} {_fmt(e)})")],
        )

    if kind == "rotate":
        deg = p.get("degrees", 0.0)
        return _wrap_in_group(
            doc,
            [("transform", f"rotate({_fmt(deg)} {_fmt(CENTER)} {_fmt(CENTER)})")],
        )

    if kind == "flip":
        if p["axis"] == "horizontal":
            matrix = f"matrix(-1 0 0 1 {_fmt(CANVAS)} 0)"
        else:
            matrix = f"matrix(1 0 0 -1 0 {_fmt(CANVAS)})"
        return _wrap_in_group(doc, [("transform", matrix)])

    if kind == "transparency":
        return _wrap_in_group(doc, [("opacity", _fmt(p["opacity"]))])

    if kind == "crop":
        return _apply_crop(doc, p["region"])

    raise ValueError(f"unknown edit kind {kind!r}")


_PAINT_ATTRS = ("fill", "stroke", "stop-color")


def _apply_color_edit(doc: SvgDocument, from_hex: str, to_hex: str) -> SvgDocument:
    target = Color.parse(from_hex)
    if target is None or target.rgb is None:
        raise ValueError(f"bad source color {from_hex!r}")
    out = doc.clone()
    hits = 0
    for el in out.iter():
        for name in _PAINT_ATTRS:
            value = el.get(name)
            if value is None or not isinstance(value.parsed, Color):
                continue
            if value.parsed.rgb is not None and value.parsed.rgb == target.rgb:
                el.set(name, AttrValue.of(name, to_hex))
                hits += 1
    if hits == 0:
        raise ColorNotFound(f"{from_hex} not present in document")
    return out


def _has_effective_stroke(el: SvgElement, ancestors_stroke: bool) -> bool:
    value = el.get("stroke")
    if value is None:
        return ancestors_stroke
    return isinstance(value.parsed, Color) and not value.parsed.is_none


def _apply_add_stroke(doc: SvgDocument, color: str, width: float) -> SvgDocument:
    out = doc.clone()
    touched = 0

    def visit(el: SvgElement, inherited_stroke: bool) -> None:
        nonlocal touched
        if el.tag == "defs":
            return
        stroke_here = _has_effective_stroke(el, inherited_stroke)
        if el.tag in SHAPE_TAGS and not stroke_here:
            el.set_raw("stroke", color)
            el.set_raw("stroke-width", _fmt(width))
            touched += 1
        for child in el.children:
            visit(child, stroke_here)

    visit(out.root, False)
    if touched == 0:
        has_any_shape = any(el.tag in SHAPE_TAGS for el in out.iter())
        if not has_any_shape:
            raise NoShapes("document has no shape elements")
    return out


def _apply_crop(doc: SvgDocument, region: str) -> SvgDocument:
    x0, y0 = 0.0, 0.0
    if region == "left-half":
        w, h = CANVAS / 2.0, CANVAS
    elif region == "right-half":
        w, h = CANVAS / 2.0, CANVAS
        x0 = CANVAS / 2.0
    elif region == "top-half":
        w, h = CANVAS, CANVAS / 2.0
    else:
        w, h = CANVAS, CANVAS / 2.0
        y0 = CANVAS / 2.0
    out = doc.clone()
    out.root.set_raw(
        "viewBox",
        f"{_fmt(x0)} {_fmt(y0)} {_fmt(w)} {_fmt(h)}",
    )
    # re-normalize the visible window back onto the full canvas
    out = normalize_viewbox(out, NormalizeConfig())
    return quantize_numbers(out, 2)


# ---------------------------------------------------------------------------
# instructions
# ---------------------------------------------------------------------------

def make_instruction(op: EditOp, rng_seed: int) -> str:
    """Seeded template choice plus fixed-phrasing parameters."""
    rng = random.Random(rng_seed)
    kind, p = op.kind, op.params
    if kind == "color_edit":
        return templates.COLOR_EDIT_FORMAT.format(frm=p["from_hex"], to=p["to_hex"])
    pool = _TEMPLATE_POOLS[kind]
    text = rng.choice(pool)
    if kind == "translate":
        return f"{text} Move it by ({_fmt(p['dx'])}, {_fmt(p['dy'])}) units."
    if kind == "scale":
        return f"{text} Use scale factor {_fmt(p['factor'])}."
    if kind == "rotate":
        return f"{text} Rotate by {_fmt(p['degrees'])} degrees around its center."
    if kind == "flip":
        return f"{text} Flip it {p['axis']}ly."
    if kind == "transparency":
        return f"{text} Set opacity to {_fmt(p['opacity'])}."
    if kind == "crop":
        return f"{text} Keep the {p['region'].replace('-', ' ')}."
    if kind == "add_stroke":
        return (
            f"{text} Use stroke color {p.get('color', '#000000')} "
            f"and width {_fmt(p.get('width', 2.0))}."
        )
    return text


# ---------------------------------------------------------------------------
# batch synthesis
# ---------------------------------------------------------------------------

def _document_colors(doc: SvgDocument) -> list[str]:
    seen: list[str] = []
    for el in doc.iter():
        for name in _PAINT_ATTRS:
            value = el.get(name)
            if value is None or not isinstance(value.parsed, Color):
                continue
            rgb = value.parsed.rgb
            if rgb is None:
                continue
            hexed = "#%02x%02x%02x" % rgb
            if hexed not in seen:
                seen.append(hexed)
    return seen


_EDIT_PALETTE = (
    "#d8bfd8", "#4682b4", "#ff6347", "#32cd32", "#ffd700", "#8a2be2",
    "#dc143c", "#20b2aa", "#ff8c00", "#6a5acd",
)


def _draw_op(kind: str, doc: SvgDocument, rng: random.Random) -> Optional[EditOp]:
    """Seeded parameters within the documented ranges."""
    if kind == "color_edit":
        colors = _document_colors(doc)
        if not colors:
            return None
        frm = rng.choice(colors)
        choices = [c for c in _EDIT_PALETTE if c != frm]
        return EditOp("color_edit", {"from_hex": frm, "to_hex": rng.choice(choices)})
    if kind == "add_stroke":
        return EditOp(
            "add_stroke",
            {"color": rng.choice(_EDIT_PALETTE), "width": rng.choice((1.0, 2.0, 3.0))},
        )
    if kind == "translate":
        return EditOp(
            "translate",
            {"dx": float(rng.randint(-32, 32)), "dy": float(rng.randint(-32, 32))},
        )
    if kind == "scale":
        return EditOp("scale", {"factor": round(rng.uniform(0.5, 1.5), 2)})
    if kind == "rotate":
        if rng.random() < 0.5:
            degrees = float(rng.choice((90, 180, 270)))
        else:
            degrees = float(rng.randint(-45, 45))
        return EditOp("rotate", {"degrees": degrees})
    if kind == "flip":
        return EditOp("flip", {"axis": rng.choice(("horizontal", "vertical"))})
    if kind == "transparency":
        return EditOp("transparency", {"opacity": round(rng.uniform(0.2, 0.8), 2)})
    if kind == "crop":
        return EditOp("crop", {"region": rng.choice(CROP_REGIONS)})
    return None


def synthesize_pairs(
    corpus: list[SvgDocument], ops_per_doc: int, seed: int
) -> list[EditSample]:
    """ops_per_doc edit samples per document; kinds are stratified so eight
    per document cover all eight operations.  Failures are logged and
    skipped, never fatal."""
    samples: list[EditSample] = []
    for doc_index, doc in enumerate(corpus):
        doc_rng = random.Random(_derive_seed(seed, doc_index, 997))
        kinds = list(EDIT_KINDS)
        doc_rng.shuffle(kinds)
        if ops_per_doc <= len(kinds):
            chosen = kinds[:ops_per_doc]
        else:
            chosen = [kinds[i % len(kinds)] for i in range(ops_per_doc)]
        for k_index, kind in enumerate(chosen):
            sample_seed = _derive_seed(seed, doc_index, k_index)
            rng = random.Random(sample_seed)
            op = _draw_op(kind, doc, rng)
            if op is None:
                log.warning("doc %d: cannot draw %s, skipping", doc_index, kind)
                continue
            try:
                edited = apply_edit(doc, op)
            except (ColorNotFound, NoShapes, ValueError) as exc:
                log.warning("doc %d: %s failed: %s", doc_index, kind, exc)
                continue
            if not validate_renderable(edited):
                log.warning("doc %d: %s produced unrenderable output", doc_index, kind)
                continue
            samples.append(
                EditSample(
                    original=doc,
                    instruction=make_instruction(op, sample_seed),
                    edited=edited,
                    op=op,
                    seed=sample_seed,
                )
            )
    return samples


def _derive_seed(seed: int, doc_index: int, k_index: int) -> int:
    return (seed * 1_000_003 + doc_index * 1_009 + k_index) & 0x7FFFFFFF


def samples_to_jsonl(samples: list[EditSample]) -> str:
    lines = []
    for i, s in enumerate(samples):
        lines.append(
            json.dumps(
                {
                    "id": f"edit-{i:06d}",
                    "op_kind": s.op.kind,
                    "params": s.op.params,
                    "instruction": s.instruction,
                    "original_svg": serialize_svg(s.original),
                    "edited_svg": serialize_svg(s.edited),
                },
                ensure_ascii=False,
                sort_keys=True,
            )
        )
    return "\n".join(lines) + ("\n" if lines else "")
