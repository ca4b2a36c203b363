"""Document renderer: SvgDocument -> RGB pixels.

Strictness contract: any structural problem (bad path data, malformed
numbers or transforms, dangling url() references, missing viewport) raises
RenderError.  The benchmark layer maps RenderError to the all-black penalty
image, so "does this render" is a meaningful pass/fail signal rather than a
best-effort guess.

Painting model: premultiplied float RGBA canvas; shapes composite through
exact-area coverage from the raster module; groups with opacity, clip-path
or blur render into their own layer first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..core.colors import Color
from ..core.model import (
    ANIMATION_TAGS,
    COMMENT_TAG,
    NumberList,
    Opaque,
    SHAPE_TAGS,
    SvgDocument,
    SvgElement,
)
from ..core.transforms import TransformList, TransformMatrix
from .geometry import GeometryError, shape_subpaths
from .raster import (
    FILL_EVENODD,
    FILL_NONZERO,
    coverage_slab,
    fill_coverage,
    flatten_cubic,
    polyline_segments,
    stroke_outline,
)


class RenderError(ValueError):
    """Document cannot be rendered."""


_SKIP_TAGS = frozenset(
    {
        "metadata", "title", "desc", "style", COMMENT_TAG,
        "text", "tspan", "textPath", "symbol", "marker", "pattern",
        "mpath",
    }
) | ANIMATION_TAGS

_INHERITED_DEFAULTS = {
    "fill": Color.parse("black"),
    "stroke": Color.parse("none"),
    "stroke-width": 1.0,
    "stroke-linecap": "butt",
    "stroke-linejoin": "miter",
    "stroke-miterlimit": 4.0,
    "fill-rule": FILL_NONZERO,
    "fill-opacity": 1.0,
    "stroke-opacity": 1.0,
}

_NUMERIC_STYLE = {"stroke-width", "stroke-miterlimit", "fill-opacity", "stroke-opacity"}


@dataclass
class Gradient:
    kind: str  # "linear" | "radial"
    units: str
    transform: TransformMatrix
    coords: dict
    stops: list  # (offset, (r, g, b), alpha)
    spread: str


def _to_float(value, what: str) -> float:
    parsed = value.parsed
    if isinstance(parsed, NumberList) and len(parsed) == 1:
        return float(parsed.values[0])
    if isinstance(parsed, Opaque):
        text = parsed.text.strip()
        if text.endswith("%"):
            try:
                return float(text[:-1]) / 100.0
            except ValueError:
                pass
        try:
            return float(text)
        except ValueError:
            pass
    raise RenderError(f"bad {what}: {value.raw!r}")


class SceneRenderer:
    def __init__(self, doc: SvgDocument, size: int):
        if size < 1:
            raise RenderError("render size must be positive")
        self.doc = doc
        self.size = int(size)
        self.ids: dict[str, SvgElement] = {}
        for el in doc.root.iter():
            ident = el.get_raw("id")
            if ident is not None and ident not in self.ids:
                self.ids[ident] = el
        self.viewbox = self._resolve_viewbox()
        self.viewport_ctm = self._viewport_transform()

    # -- setup ----------------------------------------------------------

    def _resolve_viewbox(self) -> tuple[float, float, float, float]:
        root = self.doc.root
        vb = root.get("viewBox")
        if vb is not None:
            parsed = vb.parsed
            if not isinstance(parsed, NumberList) or len(parsed) != 4:
                raise RenderError(f"bad viewBox: {vb.raw!r}")
            minx, miny, w, h = parsed.values
        else:
            wattr, hattr = root.get("width"), root.get("height")
            if wattr is None or hattr is None:
                raise RenderError("no viewBox and no width/height on root")
            w = _to_float(wattr, "width")
            h = _to_float(hattr, "height")
            minx = miny = 0.0
        if w <= 0 or h <= 0:
            raise RenderError("degenerate viewport extent")
        return (float(minx), float(miny), float(w), float(h))

    def _viewport_transform(self) -> TransformMatrix:
        minx, miny, w, h = self.viewbox
        scale = self.size / max(w, h)
        tx = (self.size - scale * w) / 2.0 - scale * minx
        ty = (self.size - scale * h) / 2.0 - scale * miny
        return TransformMatrix(scale, 0.0, 0.0, scale, tx, ty)

    # -- public API ------------------------------------------------------

    def render(self) -> np.ndarray:
        """RGB uint8 (size, size, 3) over a white background."""
        canvas = self._render_canvas()
        alpha = canvas[..., 3:4]
        rgb = canvas[..., :3] + (1.0 - alpha)  # white underneath, premultiplied
        out = np.rint(np.clip(rgb, 0.0, 1.0) * 255.0).astype(np.uint8)
        return out

    def validate(self) -> None:
        """Run the full walk without producing pixels."""
        self._walk_children(self.doc.root, None, self.viewport_ctm,
                            dict(_INHERITED_DEFAULTS), draw=False)

    def _render_canvas(self) -> np.ndarray:
        canvas = np.zeros((self.size, self.size, 4), dtype=np.float64)
        self._walk_children(self.doc.root, canvas, self.viewport_ctm,
                            dict(_INHERITED_DEFAULTS), draw=True)
        return canvas

    # -- tree walk -------------------------------------------------------

    def _walk_children(self, el, canvas, ctm, style, draw, depth=0):
        for child in el.children:
            self._walk(child, canvas, ctm, style, draw, depth)

    def _walk(self, el, canvas, ctm, style, draw, depth=0):
        if depth > 32:
            raise RenderError("element nesting too deep (reference cycle?)")
        tag = el.tag
        if tag in _SKIP_TAGS or el.is_foreign or tag == "defs":
            return
        if tag in ("linearGradient", "radialGradient", "clipPath", "mask", "filter", "stop"):
            return
        if el.get_raw("display") == "none":
            return

        local_ctm = ctm
        tattr = el.get("transform")
        if tattr is not None:
            if not isinstance(tattr.parsed, TransformList):
                raise RenderError(f"bad transform: {tattr.raw!r}")
            local_ctm = ctm @ tattr.parsed.matrix()

        local_style = self._inherit_style(style, el)
        opacity = self._element_opacity(el)
        clip_ref = self._url_attr(el, "clip-path")
        filter_ref = self._url_attr(el, "filter")

        needs_layer = opacity < 1.0 or clip_ref is not None or filter_ref is not None
        target = canvas
        if draw and needs_layer:
            target = np.zeros_like(canvas)

        if tag in SHAPE_TAGS:
            self._draw_shape(el, target, local_ctm, local_style, draw)
        elif tag == "use":
            self._draw_use(el, target, local_ctm, local_style, draw, depth)
        elif tag in ("g", "svg", "switch", "a"):
            self._walk_children(el, target, local_ctm, local_style, draw, depth + 1)
        elif tag == "image":
            # embedded rasters are out of scope; their absence only leaves
            # blank pixels, so they are skipped rather than failing the render
            return
        else:
            # unknown-but-not-foreign tags fall through as groups
            self._walk_children(el, target, local_ctm, local_style, draw, depth + 1)

        if needs_layer:
            if filter_ref is not None:
                blur = self._resolve_blur(filter_ref, local_ctm)
                if draw and blur is not None:
                    from scipy.ndimage import gaussian_filter

                    for c in range(4):
                        target[..., c] = gaussian_filter(target[..., c], sigma=blur)
            if clip_ref is not None:
                clip_cov = self._clip_coverage(clip_ref, local_ctm, draw)
                if draw:
                    target *= clip_cov[..., None]
            if draw:
                src = target * opacity
                canvas *= (1.0 - src[..., 3:4])
                canvas += src

    def _inherit_style(self, style: dict, el: SvgElement) -> dict:
        out = dict(style)
        for name in _INHERITED_DEFAULTS:
            value = el.get(name)
            if value is None:
                continue
            if name in ("fill", "stroke"):
                if not isinstance(value.parsed, Color):
                    raise RenderError(f"bad paint {name}={value.raw!r}")
                out[name] = value.parsed
            elif name in _NUMERIC_STYLE:
                num = _to_float(value, name)
                if name.endswith("opacity"):
                    num = min(max(num, 0.0), 1.0)
                out[name] = num
            elif name == "fill-rule":
                if value.raw not in (FILL_NONZERO, FILL_EVENODD, "inherit"):
                    raise RenderError(f"bad fill-rule: {value.raw!r}")
                if value.raw != "inherit":
                    out[name] = value.raw
            else:
                out[name] = value.raw
        return out

    def _element_opacity(self, el: SvgElement) -> float:
        value = el.get("opacity")
        if value is None:
            return 1.0
        return min(max(_to_float(value, "opacity"), 0.0), 1.0)

    def _url_attr(self, el: SvgElement, name: str) -> Optional[str]:
        raw = el.get_raw(name)
        if raw is None or raw.strip() == "none":
            return None
        raw = raw.strip()
        if raw.startswith("url(#") and raw.endswith(")"):
            ref = raw[5:-1].strip()
            if ref not in self.ids:
                raise RenderError(f"{name} references missing id #{ref}")
            return ref
        raise RenderError(f"bad {name} reference: {raw!r}")

    # -- shapes ----------------------------------------------------------

    def _device_polylines(self, el, ctm) -> list[tuple[np.ndarray, bool]]:
        try:
            subpaths = shape_subpaths(el)
        except GeometryError as exc:
            raise RenderError(str(exc)) from exc
        out = []
        for sp in subpaths:
            pts = [ctm.apply(*sp.start)]
            for prim in sp.primitives:
                if prim[0] == "line":
                    pts.append(ctm.apply(*prim[1]))
                else:
                    _, c1, c2, p = prim
                    p0 = pts[-1]
                    dc1, dc2, dp = ctm.apply(*c1), ctm.apply(*c2), ctm.apply(*p)
                    pts.extend(map(tuple, flatten_cubic(p0, dc1, dc2, dp)))
            out.append((np.asarray(pts, dtype=np.float64), sp.closed))
        return out

    def _draw_shape(self, el, canvas, ctm, style, draw):
        polylines = self._device_polylines(el, ctm)
        fill_paint = self._resolve_paint(style["fill"], style["fill-opacity"])
        stroke_paint = self._resolve_paint(style["stroke"], style["stroke-opacity"])
        stroke_width = style["stroke-width"] * ctm.uniform_scale()
        if not draw or not polylines:
            return
        if fill_paint is not None and el.tag != "line":
            segments = [polyline_segments(pts, close=True) for pts, _ in polylines]
            segs = np.concatenate(segments, axis=0) if segments else np.zeros((0, 4))
            slab = coverage_slab(segs, self.size, self.size, style["fill-rule"])
            self._composite(canvas, slab, fill_paint, el, ctm)
        if stroke_paint is not None and stroke_width > 0 and style["stroke-width"] > 0:
            rings = []
            for pts, closed in polylines:
                rings.extend(
                    stroke_outline(
                        pts,
                        closed,
                        stroke_width / 2.0,
                        linecap=style["stroke-linecap"],
                        linejoin=style["stroke-linejoin"],
                        miterlimit=style["stroke-miterlimit"],
                    )
                )
            if rings:
                segs = np.concatenate(
                    [polyline_segments(r, close=True) for r in rings], axis=0
                )
                slab = coverage_slab(segs, self.size, self.size, FILL_NONZERO)
                self._composite(canvas, slab, stroke_paint, el, ctm)

    def _resolve_paint(self, color: Color, paint_opacity: float):
        """None (no paint), ('solid', rgb01, alpha) or ('gradient', Gradient, alpha)."""
        if color is None or color.is_none:
            return None
        ref = color.url_ref
        if ref is not None:
            grad = self._resolve_gradient(ref)
            return ("gradient", grad, paint_opacity)
        rgb = np.array(color.rgb, dtype=np.float64) / 255.0
        return ("solid", rgb, color.alpha * paint_opacity)

    def _composite(self, canvas, slab, paint, el, ctm):
        if slab is None:
            return
        cov_s, y0, x0 = slab
        h, w = cov_s.shape
        sub = canvas[y0 : y0 + h, x0 : x0 + w]
        if paint[0] == "solid":
            _, rgb, alpha = paint
            sa = cov_s * alpha
            sub *= (1.0 - sa)[..., None]
            sub[..., :3] += rgb[None, None, :] * sa[..., None]
            sub[..., 3] += sa
            return
        _, grad, paint_opacity = paint
        ys, xs = np.nonzero(cov_s > 0.0)
        if ys.size == 0:
            return
        rgb, alpha = self._gradient_at(grad, el, ctm, xs + x0 + 0.5, ys + y0 + 0.5)
        sa = cov_s[ys, xs] * alpha * paint_opacity
        dst = sub[ys, xs, :]
        dst *= (1.0 - sa)[:, None]
        dst[:, :3] += rgb * sa[:, None]
        dst[:, 3] += sa
        sub[ys, xs, :] = dst

    # -- gradients ---------------------------------------------------------

    def _resolve_gradient(self, ref: str, _depth: int = 0) -> Gradient:
        if _depth > 8:
            raise RenderError("gradient reference cycle")
        el = self.ids.get(ref)
        if el is None or el.tag not in ("linearGradient", "radialGradient"):
            raise RenderError(f"url(#{ref}) does not name a gradient")
        parent: Optional[Gradient] = None
        href = el.get_raw("href") or el.get_raw("xlink:href")
        if href and href.startswith("#"):
            parent = self._resolve_gradient(href[1:], _depth + 1)

        units = el.get_raw("gradientUnits") or (
            parent.units if parent else "objectBoundingBox"
        )
        tattr = el.get("gradientTransform")
        if tattr is not None:
            if not isinstance(tattr.parsed, TransformList):
                raise RenderError(f"bad gradientTransform: {tattr.raw!r}")
            transform = tattr.parsed.matrix()
        else:
            transform = parent.transform if parent else TransformMatrix.identity()
        spread = el.get_raw("spreadMethod") or (parent.spread if parent else "pad")

        coords: dict[str, float] = {}
        names = (
            ("x1", "y1", "x2", "y2")
            if el.tag == "linearGradient"
            else ("cx", "cy", "r", "fx", "fy")
        )
        defaults_obb = {
            "x1": 0.0, "y1": 0.0, "x2": 1.0, "y2": 0.0,
            "cx": 0.5, "cy": 0.5, "r": 0.5,
        }
        for name in names:
            value = el.get(name)
            if value is not None:
                coords[name] = _to_float(value, name)
            elif parent is not None and name in parent.coords:
                coords[name] = parent.coords[name]
        for name in names:
            if name in coords:
                continue
            if name == "fx":
                coords[name] = coords.get("cx", 0.5)
            elif name == "fy":
                coords[name] = coords.get("cy", 0.5)
            else:
                base = defaults_obb[name]
                if units == "userSpaceOnUse":
                    # resolve the same fractions against the viewBox
                    _, _, w, h = self.viewbox
                    axis = w if name in ("x1", "x2", "cx", "r") else h
                    base = base * axis
                coords[name] = base

        stops = []
        for child in el.children:
            if child.tag != "stop":
                continue
            off_attr = child.get("offset")
            offset = _to_float(off_attr, "offset") if off_attr is not None else 0.0
            offset = min(max(offset, 0.0), 1.0)
            scolor = child.get("stop-color")
            if scolor is not None:
                if not isinstance(scolor.parsed, Color) or scolor.parsed.rgb is None:
                    raise RenderError(f"bad stop-color: {scolor.raw!r}")
                rgb = scolor.parsed.rgb
                alpha = scolor.parsed.alpha
            else:
                rgb, alpha = (0, 0, 0), 1.0
            sop = child.get("stop-opacity")
            if sop is not None:
                alpha *= min(max(_to_float(sop, "stop-opacity"), 0.0), 1.0)
            stops.append((offset, rgb, alpha))
        if not stops:
            if parent is not None and parent.stops:
                stops = parent.stops
            else:
                raise RenderError(f"gradient #{ref} has no stops")
        # enforce non-decreasing offsets
        fixed = []
        prev = 0.0
        for off, rgb, alpha in stops:
            off = max(off, prev)
            prev = off
            fixed.append((off, rgb, alpha))

        kind = "linear" if el.tag == "linearGradient" else "radial"
        return Gradient(kind, units, transform, coords, fixed, spread)

    def _gradient_at(self, grad: Gradient, el, ctm, px, py):
        """RGB (n, 3) in [0, 1] and alpha (n,) at device points."""
        matrix = ctm @ grad.transform
        if grad.units == "objectBoundingBox":
            bbox = self._user_bbox(el)
            matrix = (
                ctm
                @ TransformMatrix.translation(bbox[0], bbox[1])
                @ TransformMatrix.scaling(max(bbox[2], 1e-9), max(bbox[3], 1e-9))
                @ grad.transform
            )
        det = matrix.a * matrix.d - matrix.b * matrix.c
        if abs(det) < 1e-12:
            raise RenderError("singular gradient transform")
        inv_a, inv_b = matrix.d / det, -matrix.b / det
        inv_c, inv_d = -matrix.c / det, matrix.a / det
        inv_e = -(inv_a * matrix.e + inv_c * matrix.f)
        inv_f = -(inv_b * matrix.e + inv_d * matrix.f)
        ux = inv_a * px + inv_c * py + inv_e
        uy = inv_b * px + inv_d * py + inv_f

        c = grad.coords
        if grad.kind == "linear":
            dx, dy = c["x2"] - c["x1"], c["y2"] - c["y1"]
            denom = dx * dx + dy * dy
            if denom < 1e-15:
                t = np.zeros_like(ux)
            else:
                t = ((ux - c["x1"]) * dx + (uy - c["y1"]) * dy) / denom
        else:
            r = c["r"]
            if r <= 0:
                t = np.ones_like(ux)
            else:
                ex, ey = c["cx"] - c["fx"], c["cy"] - c["fy"]
                dx, dy = ux - c["fx"], uy - c["fy"]
                a = ex * ex + ey * ey - r * r
                de = dx * ex + dy * ey
                dd = dx * dx + dy * dy
                if abs(a) < 1e-12:
                    t = np.sqrt(dd) / r
                else:
                    disc = np.maximum(de * de - a * dd, 0.0)
                    t = (de - np.sqrt(disc)) / a
        t = _apply_spread(t, grad.spread)

        offs = np.array([s[0] for s in grad.stops])
        cols = np.array([s[1] for s in grad.stops], dtype=np.float64) / 255.0
        alphas = np.array([s[2] for s in grad.stops], dtype=np.float64)
        rgb = np.stack(
            [np.interp(t, offs, cols[:, ch]) for ch in range(3)], axis=-1
        )
        alpha = np.interp(t, offs, alphas)
        return rgb, alpha

    def _user_bbox(self, el) -> tuple[float, float, float, float]:
        """Axis-aligned control-point bbox of the shape in user space."""
        try:
            subpaths = shape_subpaths(el)
        except GeometryError as exc:
            raise RenderError(str(exc)) from exc
        xs: list[float] = []
        ys: list[float] = []
        for sp in subpaths:
            xs.append(sp.start[0])
            ys.append(sp.start[1])
            for prim in sp.primitives:
                for pt in prim[1:]:
                    xs.append(pt[0])
                    ys.append(pt[1])
        if not xs:
            return (0.0, 0.0, 1.0, 1.0)
        x0, x1 = min(xs), max(xs)
        y0, y1 = min(ys), max(ys)
        return (x0, y0, x1 - x0, y1 - y0)

    # -- use / clip / filter ----------------------------------------------

    def _draw_use(self, el, canvas, ctm, style, draw, depth):
        href = el.get_raw("href") or el.get_raw("xlink:href")
        if not href or not href.startswith("#"):
            raise RenderError(f"<use> needs a local href, got {href!r}")
        target = self.ids.get(href[1:])
        if target is None:
            raise RenderError(f"<use> references missing id {href}")
        x = el.get("x")
        y = el.get("y")
        tx = _to_float(x, "x") if x is not None else 0.0
        ty = _to_float(y, "y") if y is not None else 0.0
        local = ctm @ TransformMatrix.translation(tx, ty)
        self._walk(target, canvas, local, style, draw, depth + 1)

    def _clip_coverage(self, ref: str, ctm, draw) -> np.ndarray:
        clip_el = self.ids[ref]
        if clip_el.tag != "clipPath":
            raise RenderError(f"clip-path #{ref} is not a clipPath")
        if (clip_el.get_raw("clipPathUnits") or "userSpaceOnUse") != "userSpaceOnUse":
            raise RenderError("objectBoundingBox clipPath units not supported")
        cov = np.zeros((self.size, self.size), dtype=np.float64)
        for child in clip_el.children:
            if child.tag not in SHAPE_TAGS:
                continue
            child_ctm = ctm
            tattr = child.get("transform")
            if tattr is not None:
                if not isinstance(tattr.parsed, TransformList):
                    raise RenderError(f"bad transform: {tattr.raw!r}")
                child_ctm = ctm @ tattr.parsed.matrix()
            polylines = self._device_polylines(child, child_ctm)
            if not draw or not polylines:
                continue
            segs = np.concatenate(
                [polyline_segments(pts, close=True) for pts, _ in polylines], axis=0
            )
            rule = child.get_raw("clip-rule") or FILL_NONZERO
            child_cov = fill_coverage(segs, self.size, self.size, rule)
            np.maximum(cov, child_cov, out=cov)
        return cov

    def _resolve_blur(self, ref: str, ctm) -> Optional[tuple[float, float]]:
        filter_el = self.ids[ref]
        if filter_el.tag != "filter":
            raise RenderError(f"filter #{ref} is not a filter")
        for child in filter_el.children:
            if child.tag == "feGaussianBlur":
                std = child.get("stdDeviation")
                if std is None:
                    return None
                parsed = std.parsed
                if not isinstance(parsed, NumberList) or not 1 <= len(parsed) <= 2:
                    raise RenderError(f"bad stdDeviation: {std.raw!r}")
                sx = parsed.values[0]
                sy = parsed.values[1] if len(parsed) == 2 else sx
                scale = ctm.uniform_scale()
                return (sy * scale, sx * scale)
        return None


def _apply_spread(t: np.ndarray, spread: str) -> np.ndarray:
    if spread == "repeat":
        return np.remainder(t, 1.0)
    if spread == "reflect":
        return 1.0 - np.abs(np.remainder(t, 2.0) - 1.0)
    return np.clip(t, 0.0, 1.0)


def render_document(doc: SvgDocument, size: int = 512) -> np.ndarray:
    """Render to RGB uint8 over white.  Raises RenderError."""
    return SceneRenderer(doc, size).render()


def validate_document(doc: SvgDocument, size: int = 512) -> None:
    """Raise RenderError if the document would not render."""
    SceneRenderer(doc, size).validate()
