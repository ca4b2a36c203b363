"""Seeded synthetic icon and animation corpora.

Real corpora cannot ship with the toolkit, so the tests and the demo CLI
draw from this generator instead: editor-flavored icons with removable junk
(comments, metadata, editor attributes, unused defs, default-valued
presentation attributes) over a handful of source canvases.  Coordinates
are integers in the source frame and every canvas maps to 128 by a
power-of-two factor, which keeps the normalization pipeline numerically
exact - the property the render-preservation checks lean on.
"""

from __future__ import annotations

import random

CANVASES = (
    (128, 128),
    (256, 256),
    (512, 512),
    (256, 128),
    (128, 256),
    (64, 128),
)

PALETTE = (
    "#e63946", "#f1a208", "#2a9d8f", "#264653", "#6d597a", "#457b9d",
    "#ff9f1c", "#8338ec", "#06d6a0", "#118ab2", "#ef476f", "#073b4c",
    "#fb8500", "#606c38", "#9a031e", "#5f0f40",
)

_EDITOR_HEADERS = (
    '<!-- Generator: PixelForge Studio 3.1 -->',
    '<!-- Exported by VectorBee 2.0.4 -->',
    '<!-- Created with IconSmith (https://example.com/iconsmith) -->',
)


def _rint(rng: random.Random, lo: int, hi: int) -> int:
    return rng.randint(lo, hi)


class _IconBuilder:
    def __init__(self, rng: random.Random, width: int, height: int, margin_frac: float):
        self.rng = rng
        self.w = width
        self.h = height
        mx = int(width * margin_frac)
        my = int(height * margin_frac)
        self.x0, self.x1 = mx, width - mx
        self.y0, self.y1 = my, height - my

    def px(self) -> int:
        return _rint(self.rng, self.x0, self.x1)

    def py(self) -> int:
        return _rint(self.rng, self.y0, self.y1)

    def color(self) -> str:
        return self.rng.choice(PALETTE)

    def circle(self) -> str:
        r = _rint(self.rng, max(2, (self.x1 - self.x0) // 12), (self.x1 - self.x0) // 4)
        cx = _rint(self.rng, self.x0 + r, self.x1 - r)
        cy = _rint(self.rng, self.y0 + r, self.y1 - r)
        return f'<circle cx="{cx}" cy="{cy}" r="{r}" fill="{self.color()}"/>'

    def rect(self) -> str:
        w = _rint(self.rng, (self.x1 - self.x0) // 6, (self.x1 - self.x0) // 2)
        h = _rint(self.rng, (self.y1 - self.y0) // 6, (self.y1 - self.y0) // 2)
        x = _rint(self.rng, self.x0, self.x1 - w)
        y = _rint(self.rng, self.y0, self.y1 - h)
        extra = ""
        if self.rng.random() < 0.3:
            extra = f' rx="{max(1, min(w, h) // 8)}"'
        if self.rng.random() < 0.2:
            extra += ' fill-rule="nonzero"'
        return f'<rect x="{x}" y="{y}" width="{w}" height="{h}"{extra} fill="{self.color()}"/>'

    def ellipse(self) -> str:
        rx = _rint(self.rng, (self.x1 - self.x0) // 10, (self.x1 - self.x0) // 4)
        ry = _rint(self.rng, (self.y1 - self.y0) // 10, (self.y1 - self.y0) // 4)
        cx = _rint(self.rng, self.x0 + rx, self.x1 - rx)
        cy = _rint(self.rng, self.y0 + ry, self.y1 - ry)
        return f'<ellipse cx="{cx}" cy="{cy}" rx="{rx}" ry="{ry}" fill="{self.color()}"/>'

    def polygon(self) -> str:
        n = _rint(self.rng, 3, 6)
        pts = " ".join(f"{self.px()},{self.py()}" for _ in range(n))
        return f'<polygon points="{pts}" fill="{self.color()}"/>'

    def polyline(self) -> str:
        n = _rint(self.rng, 3, 5)
        pts = " ".join(f"{self.px()},{self.py()}" for _ in range(n))
        sw = self.rng.choice((2, 4, 6)) * max(1, self.w // 128)
        return (
            f'<polyline points="{pts}" fill="none" stroke="{self.color()}" '
            f'stroke-width="{sw}" stroke-linecap="round"/>'
        )

    def line(self) -> str:
        sw = self.rng.choice((2, 4)) * max(1, self.w // 128)
        return (
            f'<line x1="{self.px()}" y1="{self.py()}" x2="{self.px()}" '
            f'y2="{self.py()}" stroke="{self.color()}" stroke-width="{sw}"/>'
        )

    def blob_path(self) -> str:
        x, y = self.px(), self.py()
        parts = [f"M{x} {y}"]
        for _ in range(_rint(self.rng, 2, 4)):
            parts.append(
                f"C{self.px()} {self.py()} {self.px()} {self.py()} "
                f"{self.px()} {self.py()}"
            )
        parts.append("Z")
        style = f'fill="{self.color()}"'
        if self.rng.random() < 0.35:
            style = f'style="fill:{self.color()}"'
        if self.rng.random() < 0.3:
            sw = self.rng.choice((2, 3)) * max(1, self.w // 128)
            style += f' stroke="{self.color()}" stroke-width="{sw}"'
        junk = ""
        if self.rng.random() < 0.3:
            junk = ' sodipodi:nodetypes="ccc"'
        return f'<path d="{" ".join(parts)}" {style}{junk}/>'

    def gradient_rect(self, ident: str) -> tuple[str, str]:
        c0, c1 = self.color(), self.color()
        grad = (
            f'<linearGradient id="{ident}" x1="0" y1="0" x2="1" y2="1">'
            f'<stop offset="0" stop-color="{c0}"/>'
            f'<stop offset="1" stop-color="{c1}"/></linearGradient>'
        )
        w = _rint(self.rng, (self.x1 - self.x0) // 4, (self.x1 - self.x0) // 2)
        h = _rint(self.rng, (self.y1 - self.y0) // 4, (self.y1 - self.y0) // 2)
        x = _rint(self.rng, self.x0, self.x1 - w)
        y = _rint(self.rng, self.y0, self.y1 - h)
        rect = f'<rect x="{x}" y="{y}" width="{w}" height="{h}" fill="url(#{ident})"/>'
        return grad, rect

    def shape(self) -> str:
        kind = self.rng.choice(
            ("circle", "rect", "ellipse", "polygon", "polyline", "line", "path", "path")
        )
        return {
            "circle": self.circle,
            "rect": self.rect,
            "ellipse": self.ellipse,
            "polygon": self.polygon,
            "polyline": self.polyline,
            "line": self.line,
            "path": self.blob_path,
        }[kind]()


def make_icon(seed: int, *, verbose: bool = True, margin_frac: float = 0.16) -> str:
    """One synthetic icon as SVG text."""
    rng = random.Random(seed)
    width, height = rng.choice(CANVASES)
    b = _IconBuilder(rng, width, height, margin_frac)

    defs_parts: list[str] = []
    body_parts: list[str] = []

    n_shapes = _rint(rng, 2, 6)
    group_budget = n_shapes
    while group_budget > 0:
        if group_budget >= 2 and rng.random() < 0.4:
            inner = [b.shape() for _ in range(2)]
            group_budget -= 2
            gattrs = ""
            if verbose and rng.random() < 0.4:
                gattrs = ' inkscape:label="Layer"'
            if rng.random() < 0.25:
                tx, ty = _rint(rng, -8, 8), _rint(rng, -8, 8)
                gattrs += f' transform="translate({tx} {ty})"'
            body_parts.append(f"<g{gattrs}>{''.join(inner)}</g>")
        else:
            body_parts.append(b.shape())
            group_budget -= 1

    if rng.random() < 0.25:
        grad, rect = b.gradient_rect(f"grad{seed & 0xFFFF}")
        defs_parts.append(grad)
        body_parts.append(rect)
    if verbose and rng.random() < 0.5:
        defs_parts.append(
            f'<linearGradient id="unusedGrad{seed & 0xFFFF}">'
            '<stop offset="0" stop-color="#ffffff"/>'
            "</linearGradient>"
        )

    root_attrs = [f'viewBox="0 0 {width} {height}"']
    prolog = ""
    if verbose:
        prolog = '<?xml version="1.0" encoding="UTF-8"?>\n'
        root_attrs.insert(0, 'xmlns="http://www.w3.org/2000/svg"')
        root_attrs.append(f'width="{width}"')
        root_attrs.append(f'height="{height}"')
        if rng.random() < 0.6:
            root_attrs.append('version="1.1"')
        if rng.random() < 0.4:
            root_attrs.append('xmlns:inkscape="http://www.inkscape.org/namespaces/inkscape"')
        if rng.random() < 0.3:
            root_attrs.append('xml:space="preserve"')

    pieces = [prolog, f"<svg {' '.join(root_attrs)}>"]
    if verbose:
        if rng.random() < 0.7:
            pieces.append(rng.choice(_EDITOR_HEADERS))
        if rng.random() < 0.5:
            pieces.append("<title>synthetic icon</title>")
        if rng.random() < 0.4:
            pieces.append("<desc>generated sample</desc>")
        if rng.random() < 0.4:
            pieces.append("<metadata>generator-junk</metadata>")
    if defs_parts:
        pieces.append(f"<defs>{''.join(defs_parts)}</defs>")
    pieces.extend(body_parts)
    pieces.append("</svg>")
    return "".join(pieces)


def generate_corpus(n: int, seed: int = 0, **kwargs) -> list[str]:
    return [make_icon(seed * 1_000_003 + i, **kwargs) for i in range(n)]


def generate_canonical_corpus(n: int, seed: int = 0, **kwargs) -> list[str]:
    """Icons run through the full canonicalization pipeline."""
    from .core.parser import parse_svg
    from .core.serializer import serialize_svg
    from .normalize import pipeline

    out = []
    for text in generate_corpus(n, seed, **kwargs):
        out.append(serialize_svg(pipeline(parse_svg(text))))
    return out


# ---------------------------------------------------------------------------
# animations
# ---------------------------------------------------------------------------

def make_animation(seed: int) -> str:
    """One canonical 128x128 SMIL animation."""
    rng = random.Random(seed)
    color_a, color_b = rng.choice(PALETTE), rng.choice(PALETTE)
    dur = rng.choice(("1s", "2s", "1.5s"))
    repeat = rng.choice(("1", "2", "indefinite"))
    fill = rng.choice(('fill="freeze" ', ""))
    kind = rng.choice(("move", "grow", "color", "spin", "motion"))
    if kind == "move":
        x0, x1 = _rint(rng, 16, 40), _rint(rng, 80, 112)
        body = (
            f'<circle cx="{x0}" cy="64" r="12" fill="{color_a}">'
            f'<animate attributeName="cx" from="{x0}" to="{x1}" dur="{dur}" '
            f'repeatCount="{repeat}" {fill}/></circle>'
        )
    elif kind == "grow":
        body = (
            f'<circle cx="64" cy="64" r="10" fill="{color_a}">'
            f'<animate attributeName="r" from="10" to="{_rint(rng, 24, 44)}" '
            f'dur="{dur}" repeatCount="{repeat}" {fill}/></circle>'
        )
    elif kind == "color":
        body = (
            f'<rect x="32" y="32" width="64" height="64" fill="{color_a}">'
            f'<animate attributeName="fill" from="{color_a}" to="{color_b}" '
            f'dur="{dur}" repeatCount="{repeat}" {fill}/></rect>'
        )
    elif kind == "spin":
        body = (
            f'<rect x="44" y="44" width="40" height="40" fill="{color_a}">'
            f'<animateTransform attributeName="transform" type="rotate" '
            f'from="0 64 64" to="360 64 64" dur="{dur}" repeatCount="{repeat}" '
            f"{fill}/></rect>"
        )
    else:
        body = (
            f'<circle cx="0" cy="0" r="8" fill="{color_a}">'
            f'<animateMotion path="M24 64C44 24 84 24 104 64" dur="{dur}" '
            f'repeatCount="{repeat}" {fill}/></circle>'
        )
    return f'<svg viewBox="0 0 128 128">{body}</svg>'


def generate_animation_corpus(n: int, seed: int = 0) -> list[str]:
    return [make_animation(seed * 7_919 + i) for i in range(n)]
