"""Canvas canonicalization and code simplification.

``normalize_viewbox`` maps every document onto a 128x128 viewBox with a
single uniform scale (non-square sources are centered, never stretched),
``simplify`` strips everything that does not affect rendering, and
``quantize_numbers`` rounds every literal to the tokenizer's two-decimal
grid.  ``pipeline`` chains the three.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .core.colors import Color
from .core.model import (
    ANIMATION_TAGS,
    AttrValue,
    COMMENT_TAG,
    NumberList,
    Opaque,
    SvgDocument,
    SvgElement,
)
from .core.pathdata import PathData
from .core.serializer import format_number, round_half_away
from .core.transforms import TransformList


class NoExtent(ValueError):
    """Document has neither a viewBox nor width/height."""


class DegenerateExtent(ValueError):
    """Source extent is zero or negative."""


@dataclass(frozen=True)
class NormalizeConfig:
    target_canvas: tuple[float, float] = (128.0, 128.0)
    precision: int = 2

    def __post_init__(self):
        if self.target_canvas[0] <= 0 or self.target_canvas[1] <= 0:
            raise ValueError("target canvas must be positive")


_X_ATTRS = frozenset({"x", "x1", "x2", "cx", "fx"})
_Y_ATTRS = frozenset({"y", "y1", "y2", "cy", "fy"})
_LEN_ATTRS = frozenset(
    {"r", "rx", "ry", "width", "height", "stroke-width", "font-size", "stdDeviation"}
)

_NUM_RE = re.compile(r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?")


def _extent_value(raw: str, reference: float) -> float:
    text = raw.strip()
    if text.endswith("px"):
        text = text[:-2]
    if text.endswith("%"):
        return float(text[:-1]) / 100.0 * reference
    return float(text)


def source_extent(doc: SvgDocument) -> tuple[float, float, float, float]:
    """(minx, miny, width, height) from viewBox or width/height attributes."""
    root = doc.root
    vb = root.get("viewBox")
    if vb is not None and isinstance(vb.parsed, NumberList) and len(vb.parsed) == 4:
        minx, miny, w, h = vb.parsed.values
        if w <= 0 or h <= 0:
            raise DegenerateExtent(f"viewBox {vb.raw!r}")
        return (minx, miny, w, h)
    wattr, hattr = root.get_raw("width"), root.get_raw("height")
    if wattr is None or hattr is None:
        raise NoExtent("neither viewBox nor width/height present")
    try:
        w = _extent_value(wattr, 0.0)
        h = _extent_value(hattr, 0.0)
    except ValueError as exc:
        raise NoExtent(f"unparseable width/height: {wattr!r} x {hattr!r}") from exc
    if w <= 0 or h <= 0:
        raise DegenerateExtent(f"width/height {wattr!r} x {hattr!r}")
    return (0.0, 0.0, w, h)


def normalize_viewbox(doc: SvgDocument, cfg: NormalizeConfig = NormalizeConfig()) -> SvgDocument:
    """Rescale the document onto ``0 0 tw th`` with uniform scale and
    centering; width/height leave the root."""
    minx, miny, src_w, src_h = source_extent(doc)
    tw, th = cfg.target_canvas
    scale = min(tw / src_w, th / src_h)
    off_x = (tw - scale * src_w) / 2.0 - scale * minx
    off_y = (th - scale * src_h) / 2.0 - scale * miny

    out = doc.clone()
    _rescale_element(out.root, scale, off_x, off_y, (src_w, src_h))
    root = out.root
    root.remove_attr("width")
    root.remove_attr("height")
    vb_text = "0 0 {} {}".format(format_number(tw, 4), format_number(th, 4))
    root.set("viewBox", AttrValue.of("viewBox", vb_text))
    # keep viewBox in front for readability: move it to position of old one
    return out


def _resolve_percent(raw: str, attr: str, src: tuple[float, float]) -> float | None:
    text = raw.strip()
    if not text.endswith("%"):
        return None
    try:
        frac = float(text[:-1]) / 100.0
    except ValueError:
        return None
    w, h = src
    if attr in _X_ATTRS or attr == "width":
        return frac * w
    if attr in _Y_ATTRS or attr == "height":
        return frac * h
    # lengths resolve against the normalized diagonal
    return frac * ((w * w + h * h) / 2.0) ** 0.5


def _rescale_element(el: SvgElement, s: float, ox: float, oy: float, src) -> None:
    if el.tag == COMMENT_TAG:
        return
    if el.tag == "use":
        # x/y on use are supplemental translations: the referenced geometry
        # already receives the letterbox offset, so only the scale applies
        fx = fy = lambda v: s * v
    else:
        fx = lambda v: s * v + ox
        fy = lambda v: s * v + oy

    # gradient/pattern/filter geometry defaults to objectBoundingBox units,
    # where coordinates are bbox fractions and must not be touched
    skip_geometry = False
    if el.tag in ("linearGradient", "radialGradient", "pattern", "filter"):
        units_attr = "filterUnits" if el.tag == "filter" else "gradientUnits"
        units = el.get_raw(units_attr) or "objectBoundingBox"
        skip_geometry = units != "userSpaceOnUse"

    for i, (name, value) in enumerate(list(el.attrs)):
        if skip_geometry and (
            name in _X_ATTRS or name in _Y_ATTRS or name in _LEN_ATTRS
        ):
            continue
        parsed = value.parsed
        if isinstance(parsed, Opaque):
            resolved = _resolve_percent(parsed.text, name, src)
            if resolved is not None and (
                name in _X_ATTRS or name in _Y_ATTRS or name in _LEN_ATTRS
            ):
                parsed = NumberList((resolved,))
            else:
                continue
        if name == "viewBox":
            continue
        if name in _X_ATTRS and isinstance(parsed, NumberList) and len(parsed) == 1:
            el.attrs[i] = (name, _num_attr(name, fx(parsed.values[0])))
        elif name in _Y_ATTRS and isinstance(parsed, NumberList) and len(parsed) == 1:
            el.attrs[i] = (name, _num_attr(name, fy(parsed.values[0])))
        elif name in _LEN_ATTRS and isinstance(parsed, NumberList):
            el.attrs[i] = (
                name,
                AttrValue(
                    " ".join(format_number(s * v, 4) for v in parsed.values),
                    NumberList(tuple(s * v for v in parsed.values)),
                ),
            )
        elif name == "points" and isinstance(parsed, NumberList):
            vals = list(parsed.values)
            mapped = []
            for j in range(0, len(vals) - 1, 2):
                mapped.extend((fx(vals[j]), fy(vals[j + 1])))
            if len(vals) % 2:
                mapped.append(fx(vals[-1]))
            el.attrs[i] = (
                name,
                AttrValue(
                    " ".join(format_number(v, 4) for v in mapped),
                    NumberList(tuple(mapped)),
                ),
            )
        elif name == "d" and isinstance(parsed, PathData):
            new_path = parsed.map_coords(lambda x, y: (fx(x), fy(y)))
            el.attrs[i] = (name, AttrValue(new_path.to_string(4), new_path))
        elif isinstance(parsed, TransformList):
            conj = parsed.conjugate(s, ox, oy)
            el.attrs[i] = (name, AttrValue(conj.to_string(4), conj))

    if el.tag in ANIMATION_TAGS:
        _rescale_animation(el, s, ox, oy)

    for child in el.children:
        _rescale_element(child, s, ox, oy, src)


def _num_attr(name: str, value: float) -> AttrValue:
    return AttrValue(format_number(value, 4), NumberList((value,)))


def _map_value_list(raw: str, fn) -> str | None:
    parts = _NUM_RE.findall(raw)
    if not parts:
        return None
    residue = _NUM_RE.sub("", raw).replace(",", " ").replace(";", " ").strip()
    if residue:
        return None
    return " ".join(format_number(fn(float(p)), 4) for p in parts)


def _rescale_animation(el: SvgElement, s: float, ox: float, oy: float) -> None:
    """Rescale from/to/values so sampled animations match the new canvas."""
    name = el.get_raw("attributeName")
    tag = el.tag

    def map_each(fn) -> None:
        for attr in ("from", "to"):
            raw = el.get_raw(attr)
            if raw is None:
                continue
            mapped = _map_value_list(raw, fn)
            if mapped is not None:
                el.set_raw(attr, mapped)
        values = el.get_raw("values")
        if values is not None:
            parts = [v.strip() for v in values.split(";")]
            mapped_parts = [_map_value_list(p, fn) if p else p for p in parts]
            if all(m is not None for m, p in zip(mapped_parts, parts) if p):
                el.set_raw(
                    "values",
                    ";".join(m if m is not None else "" for m in mapped_parts),
                )

    if tag == "animate" or tag == "set":
        if name in _X_ATTRS:
            map_each(lambda v: s * v + ox)
        elif name in _Y_ATTRS:
            map_each(lambda v: s * v + oy)
        elif name in _LEN_ATTRS:
            map_each(lambda v: s * v)
        return
    if tag == "animateTransform":
        ttype = el.get_raw("type") or "translate"
        if ttype == "translate":
            map_each(lambda v: s * v)
        elif ttype == "rotate":
            _rescale_rotate_values(el, s, ox, oy)
        return
    if tag == "animateMotion":
        raw = el.get_raw("path")
        if raw is not None:
            try:
                path = PathData.parse(raw)
            except ValueError:
                return
            # motion is a supplemental translation: conjugation scales it
            scaled = path.map_coords(lambda x, y: (s * x, s * y))
            el.set_raw("path", scaled.to_string(4))


def _rescale_rotate_values(el: SvgElement, s: float, ox: float, oy: float) -> None:
    def map_rotate(raw: str) -> str | None:
        parts = _NUM_RE.findall(raw)
        if len(parts) == 1:
            angle = float(parts[0])
            px, py = ox, oy  # origin pivot maps to the letterbox offset
            return f"{format_number(angle, 4)} {format_number(px, 4)} {format_number(py, 4)}"
        if len(parts) == 3:
            angle, px, py = (float(p) for p in parts)
            return "{} {} {}".format(
                format_number(angle, 4),
                format_number(s * px + ox, 4),
                format_number(s * py + oy, 4),
            )
        return None

    for attr in ("from", "to"):
        raw = el.get_raw(attr)
        if raw is None:
            continue
        mapped = map_rotate(raw)
        if mapped is not None:
            el.set_raw(attr, mapped)
    values = el.get_raw("values")
    if values is not None:
        parts = [v.strip() for v in values.split(";")]
        mapped_parts = [map_rotate(p) if p else p for p in parts]
        if all(m is not None for m, p in zip(mapped_parts, parts) if p):
            el.set_raw("values", ";".join(m or "" for m in mapped_parts))


# ---------------------------------------------------------------------------
# quantization
# ---------------------------------------------------------------------------

def quantize_numbers(doc: SvgDocument, precision: int = 2) -> SvgDocument:
    """Round every numeric literal half-away-from-zero to ``precision``."""
    out = doc.clone()
    rnd = lambda v: round_half_away(v, precision)
    for el in out.iter():
        for i, (name, value) in enumerate(list(el.attrs)):
            parsed = value.parsed
            if isinstance(parsed, NumberList):
                vals = tuple(rnd(v) for v in parsed.values)
                el.attrs[i] = (
                    name,
                    AttrValue(
                        " ".join(format_number(v, precision) for v in vals),
                        NumberList(vals),
                    ),
                )
            elif isinstance(parsed, PathData):
                q = parsed.map_numbers(rnd)
                el.attrs[i] = (name, AttrValue(q.to_string(precision), q))
            elif isinstance(parsed, TransformList):
                q = parsed.map_numbers(rnd)
                el.attrs[i] = (name, AttrValue(q.to_string(precision), q))
        if el.tag in ANIMATION_TAGS:
            for attr in ("from", "to", "values"):
                raw = el.get_raw(attr)
                if raw is None:
                    continue
                if attr == "values":
                    parts = [p.strip() for p in raw.split(";")]
                    mapped = [
                        _map_value_list(p, rnd) if p else p for p in parts
                    ]
                    if all(m is not None for m, p in zip(mapped, parts) if p):
                        el.set_raw(attr, ";".join(m or "" for m in mapped))
                else:
                    mapped = _map_value_list(raw, rnd)
                    if mapped is not None:
                        el.set_raw(attr, mapped)
    return out


# ---------------------------------------------------------------------------
# simplification
# ---------------------------------------------------------------------------

_EDITOR_PREFIXES = (
    "inkscape", "sodipodi", "sketch", "serif", "figma", "vectornator",
    "krita", "adobe", "illustrator", "corel", "svg-edit", "graphml",
)

_JUNK_TAGS = frozenset({"metadata", "title", "desc"})

_JUNK_ATTRS = frozenset(
    {"version", "baseProfile", "xml:space", "enable-background",
     "data-name", "role"}
)

# presentation attribute defaults; second field: property inherits
_DEFAULTS: dict[str, tuple[str, bool]] = {
    "fill": ("#000000", True),
    "stroke": ("none", True),
    "stroke-width": ("1", True),
    "stroke-linecap": ("butt", True),
    "stroke-linejoin": ("miter", True),
    "stroke-miterlimit": ("4", True),
    "fill-rule": ("nonzero", True),
    "fill-opacity": ("1", True),
    "stroke-opacity": ("1", True),
    "opacity": ("1", False),
}

_URL_REF_RE = re.compile(r"url\(\s*#([^)\s]+)\s*\)")


def _collect_references(root: SvgElement) -> set[str]:
    refs: set[str] = set()
    for el in root.iter():
        for name, value in el.attrs:
            raw = value.raw
            for m in _URL_REF_RE.finditer(raw):
                refs.add(m.group(1))
            if name in ("href", "xlink:href") and raw.startswith("#"):
                refs.add(raw[1:])
            if name == "begin":
                # syncbase begins reference other elements by id
                for token in raw.split(";"):
                    token = token.strip()
                    if "." in token:
                        refs.add(token.split(".", 1)[0])
    return refs


def _is_editor_name(name: str) -> bool:
    if ":" in name:
        prefix = name.split(":", 1)[0]
        if prefix == "xmlns":
            suffix = name.split(":", 1)[1]
            return suffix != "xlink"
        return prefix not in ("xlink", "xml")
    return False


def _values_equal(name: str, raw: str, default: str) -> bool:
    if name in ("fill", "stroke"):
        a, b = Color.parse(raw), Color.parse(default)
        if a is None or b is None:
            return False
        if a.rgb is None or b.rgb is None:
            return a.rgb is None and b.rgb is None and a.alpha == b.alpha
        return a.rgb == b.rgb and a.alpha == b.alpha
    try:
        return float(raw) == float(default)
    except ValueError:
        return raw.strip() == default


def simplify(doc: SvgDocument) -> SvgDocument:
    """Drop comments, metadata, editor junk, unreferenced ids/defs and
    default-valued presentation attributes.  Rendering-relevant structure,
    including every group wrapper, survives untouched."""
    out = doc.clone()
    refs = _collect_references(out.root)

    def prune(el: SvgElement, inherited: frozenset[str], in_defs: bool) -> None:
        kept_children = []
        for child in el.children:
            if child.tag == COMMENT_TAG or child.tag in _JUNK_TAGS:
                continue
            if child.is_foreign:
                continue
            if child.tag == "defs" and not _defs_used(child, refs):
                continue
            kept_children.append(child)
        el.children = kept_children

        set_here: set[str] = set()
        new_attrs: list[tuple[str, AttrValue]] = []
        for name, value in el.attrs:
            if _is_editor_name(name) or name in _JUNK_ATTRS:
                continue
            if name == "id" and value.raw not in refs:
                continue
            if name in _DEFAULTS and not in_defs:
                default, inherits = _DEFAULTS[name]
                shadowed = inherits and name in inherited
                if not shadowed and _values_equal(name, value.raw, default):
                    continue
            if name in _DEFAULTS:
                set_here.add(name)
            new_attrs.append((name, value))
        el.attrs = new_attrs

        child_inherited = inherited | frozenset(
            n for n in set_here if _DEFAULTS[n][1]
        )
        for child in el.children:
            if child.tag == "defs":
                _prune_defs(child, refs)
                prune_children_of_defs(child, child_inherited)
            else:
                prune(child, child_inherited, in_defs)

    def prune_children_of_defs(defs_el: SvgElement, inherited: frozenset[str]) -> None:
        for child in defs_el.children:
            prune(child, inherited, in_defs=True)

    prune(out.root, frozenset(), in_defs=False)
    return out


def _subtree_ids(el: SvgElement) -> set[str]:
    ids = set()
    for node in el.iter():
        ident = node.get_raw("id")
        if ident:
            ids.add(ident)
    return ids


def _defs_used(defs_el: SvgElement, refs: set[str]) -> bool:
    return bool(_subtree_ids(defs_el) & refs)


def _prune_defs(defs_el: SvgElement, refs: set[str]) -> None:
    defs_el.children = [
        child
        for child in defs_el.children
        if child.tag != COMMENT_TAG
        and not child.is_foreign
        and (_subtree_ids(child) & refs)
    ]


# ---------------------------------------------------------------------------
# pipeline
# ---------------------------------------------------------------------------

def pipeline(
    doc: SvgDocument,
    cfg: NormalizeConfig = NormalizeConfig(),
    *,
    run_simplify: bool = True,
) -> SvgDocument:
    """normalize_viewbox -> simplify -> quantize_numbers."""
    out = normalize_viewbox(doc, cfg)
    if run_simplify:
        out = simplify(out)
    return quantize_numbers(out, cfg.precision)
