"""Declarative animation sampling: materialize the document at a time t.

Scope: animate / animateTransform / animateMotion / set with from/to or
values lists, linear interpolation (calcMode is ignored), begin offsets,
dur, repeatCount (number or indefinite) and fill freeze/remove.  Sampling
substitutes the computed attribute values into a plain static document so
the renderer needs no animation awareness.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from ..core.colors import Color
from ..core.model import ANIMATION_TAGS, AttrValue, SvgDocument, SvgElement
from ..core.pathdata import PathData
from ..core.serializer import format_number
from ..core.transforms import TransformEntry, TransformList

_CLOCK_RE = re.compile(r"^\s*([0-9.]+)\s*(h|min|s|ms)?\s*$")
_NUM_RE = re.compile(r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?")


class AnimationError(ValueError):
    pass


def parse_clock(text: str) -> float:
    """Clock value in seconds.  Bare numbers are seconds."""
    m = _CLOCK_RE.match(text)
    if not m:
        raise AnimationError(f"bad clock value {text!r}")
    value = float(m.group(1))
    unit = m.group(2) or "s"
    return value * {"h": 3600.0, "min": 60.0, "s": 1.0, "ms": 0.001}[unit]


@dataclass
class Timing:
    begin: float
    dur: float
    repeat: float  # repetition count; inf for indefinite
    freeze: bool

    @property
    def active_end(self) -> float:
        if self.repeat == float("inf"):
            return float("inf")
        return self.begin + self.dur * self.repeat

    def progress(self, t: float) -> Optional[float]:
        """Interpolation fraction at time t, or None when inactive."""
        if self.dur <= 0:
            return None
        if t < self.begin:
            return None
        local = (t - self.begin) / self.dur
        if local < self.repeat:
            frac = local % 1.0
            return frac
        # past the active end
        if self.freeze:
            last = self.repeat % 1.0
            return last if last > 0 else 1.0
        return None


def element_timing(el: SvgElement) -> Timing:
    begin_raw = el.get_raw("begin", "0s") or "0s"
    begin_first = begin_raw.split(";")[0].strip()
    try:
        begin = parse_clock(begin_first) if begin_first else 0.0
    except AnimationError:
        begin = 0.0  # event/syncbase begins start at document time zero
    dur_raw = el.get_raw("dur", "indefinite") or "indefinite"
    dur = parse_clock(dur_raw) if dur_raw != "indefinite" else 0.0
    repeat_raw = el.get_raw("repeatCount")
    if repeat_raw is None:
        repeat = 1.0
    elif repeat_raw.strip() == "indefinite":
        repeat = float("inf")
    else:
        repeat = float(repeat_raw)
    freeze = (el.get_raw("fill") or "remove") == "freeze"
    return Timing(begin=begin, dur=dur, repeat=repeat, freeze=freeze)


def resolve_duration(doc: SvgDocument) -> Optional[float]:
    """Longest begin+dur*repeat over all animation elements; one repeat is
    assumed for indefinite so sampling still covers a full cycle."""
    longest: Optional[float] = None
    for el in doc.iter():
        if el.tag not in ANIMATION_TAGS:
            continue
        timing = element_timing(el)
        if timing.dur <= 0:
            continue
        repeat = 1.0 if timing.repeat == float("inf") else timing.repeat
        end = timing.begin + timing.dur * repeat
        if longest is None or end > longest:
            longest = end
    return longest


def _value_track(el: SvgElement) -> Optional[list[str]]:
    values = el.get_raw("values")
    if values:
        track = [v.strip() for v in values.split(";") if v.strip()]
        return track if len(track) >= 2 else None
    from_v = el.get_raw("from")
    to_v = el.get_raw("to")
    if to_v is None:
        return None
    if from_v is None:
        return None  # to-animations need the base value; out of scope
    return [from_v, to_v]


def _interpolate(a: str, b: str, frac: float) -> str:
    nums_a = _NUM_RE.findall(a)
    nums_b = _NUM_RE.findall(b)
    if nums_a and len(nums_a) == len(nums_b):
        residue_a = _NUM_RE.sub("", a).replace(",", " ").strip()
        if not residue_a:
            vals = [
                float(x) + (float(y) - float(x)) * frac
                for x, y in zip(nums_a, nums_b)
            ]
            return " ".join(format_number(v, 4) for v in vals)
    ca, cb = Color.parse(a), Color.parse(b)
    if ca is not None and cb is not None and ca.rgb and cb.rgb:
        rgb = tuple(
            int(round(x + (y - x) * frac)) for x, y in zip(ca.rgb, cb.rgb)
        )
        return "#%02x%02x%02x" % rgb
    # non-interpolable values switch discretely at the midpoint
    return a if frac < 0.5 else b


def _track_value(track: list[str], frac: float) -> str:
    if frac >= 1.0:
        return track[-1]
    scaled = frac * (len(track) - 1)
    idx = int(scaled)
    return _interpolate(track[idx], track[idx + 1], scaled - idx)


def _motion_position(el: SvgElement, frac: float) -> Optional[tuple[float, float, float]]:
    """Point and tangent angle along an animateMotion path at fraction frac."""
    path_raw = el.get_raw("path")
    if path_raw is None:
        return None
    try:
        path = PathData.parse(path_raw)
    except ValueError as exc:
        raise AnimationError(f"bad motion path: {exc}") from exc
    from .geometry import path_subpaths
    from .raster import flatten_cubic

    pts: list[tuple[float, float]] = []
    for sp in path_subpaths(path):
        cur = sp.start
        if not pts:
            pts.append(cur)
        for prim in sp.primitives:
            if prim[0] == "line":
                pts.append(prim[1])
            else:
                _, c1, c2, p = prim
                pts.extend(map(tuple, flatten_cubic(pts[-1], c1, c2, p, tol=0.01)))
        if sp.closed and pts and pts[0] != pts[-1]:
            pts.append(pts[0])
    if len(pts) < 2:
        return None
    import math

    lengths = [
        math.hypot(q[0] - p[0], q[1] - p[1]) for p, q in zip(pts, pts[1:])
    ]
    total = sum(lengths)
    if total <= 0:
        return None
    target = min(max(frac, 0.0), 1.0) * total
    acc = 0.0
    for (p, q), seg_len in zip(zip(pts, pts[1:]), lengths):
        if acc + seg_len >= target or (p, q) == (pts[-2], pts[-1]):
            u = (target - acc) / seg_len if seg_len > 0 else 0.0
            x = p[0] + (q[0] - p[0]) * u
            y = p[1] + (q[1] - p[1]) * u
            angle = math.degrees(math.atan2(q[1] - p[1], q[0] - p[0]))
            return (x, y, angle)
        acc += seg_len
    return None


def document_at_time(doc: SvgDocument, t: float) -> SvgDocument:
    """Static snapshot of the document with animations sampled at time t."""
    snapshot = doc.clone()
    ids = {}
    for el in snapshot.iter():
        ident = el.get_raw("id")
        if ident is not None and ident not in ids:
            ids[ident] = el

    def target_of(anim: SvgElement, parent: SvgElement) -> Optional[SvgElement]:
        href = anim.get_raw("href") or anim.get_raw("xlink:href")
        if href and href.startswith("#"):
            return ids.get(href[1:])
        return parent

    def visit(el: SvgElement) -> None:
        for child in list(el.children):
            if child.tag in ANIMATION_TAGS:
                _apply_animation(child, target_of(child, el), t)
            else:
                visit(child)

    visit(snapshot.root)
    # sampled documents must not re-animate downstream
    def strip(el: SvgElement) -> None:
        el.children = [c for c in el.children if c.tag not in ANIMATION_TAGS]
        for child in el.children:
            strip(child)

    strip(snapshot.root)
    return snapshot


def _apply_animation(anim: SvgElement, target: Optional[SvgElement], t: float) -> None:
    if target is None:
        return
    timing = element_timing(anim)
    frac = timing.progress(t)
    if frac is None:
        return

    if anim.tag == "set":
        to_v = anim.get_raw("to")
        name = anim.get_raw("attributeName")
        if to_v is not None and name:
            target.set_raw(name, to_v)
        return

    if anim.tag == "animate":
        name = anim.get_raw("attributeName")
        track = _value_track(anim)
        if name and track:
            target.set_raw(name, _track_value(track, frac))
        return

    if anim.tag == "animateTransform":
        ttype = anim.get_raw("type") or "translate"
        track = _value_track(anim)
        if not track:
            return
        value = _track_value(track, frac)
        nums = tuple(float(x) for x in _NUM_RE.findall(value))
        func = {
            "translate": "translate",
            "scale": "scale",
            "rotate": "rotate",
            "skewX": "skewX",
            "skewY": "skewY",
        }.get(ttype)
        if func is None or not nums:
            return
        entry = TransformEntry(func, nums)
        additive = (anim.get_raw("additive") or "replace") == "sum"
        existing = target.get("transform")
        if additive and existing is not None and isinstance(
            existing.parsed, TransformList
        ):
            entries = existing.parsed.entries + (entry,)
        else:
            entries = (entry,)
        new_list = TransformList(entries)
        target.set("transform", AttrValue(new_list.to_string(4), new_list))
        return

    if anim.tag == "animateMotion":
        pos = _motion_position(anim, frac)
        if pos is None:
            return
        x, y, angle = pos
        rotate_raw = anim.get_raw("rotate")
        entries: list[TransformEntry] = [TransformEntry("translate", (x, y))]
        if rotate_raw == "auto":
            entries.append(TransformEntry("rotate", (angle,)))
        elif rotate_raw and rotate_raw != "auto-reverse":
            try:
                entries.append(TransformEntry("rotate", (float(rotate_raw),)))
            except ValueError:
                pass
        elif rotate_raw == "auto-reverse":
            entries.append(TransformEntry("rotate", (angle + 180.0,)))
        existing = target.get("transform")
        if existing is not None and isinstance(existing.parsed, TransformList):
            all_entries = existing.parsed.entries + tuple(entries)
        else:
            all_entries = tuple(entries)
        new_list = TransformList(all_entries)
        target.set("transform", AttrValue(new_list.to_string(4), new_list))
