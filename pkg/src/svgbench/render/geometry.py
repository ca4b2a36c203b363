"""Shape elements -> subpaths of line/cubic primitives in user space.

Quadratics and elliptical arcs are converted to cubics here so the device
pipeline only ever sees lines and cubic Beziers (both affine-invariant).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..core.model import NumberList, Opaque, SvgElement
from ..core.pathdata import PathData

# circle-from-cubics control distance
KAPPA = 4.0 * (math.sqrt(2.0) - 1.0) / 3.0

Point = tuple[float, float]


class GeometryError(ValueError):
    """Shape attributes do not form valid drawable geometry."""


@dataclass
class Subpath:
    start: Point
    primitives: list[tuple] = field(default_factory=list)  # ("line", p) | ("cubic", c1, c2, p)
    closed: bool = False

    def line_to(self, p: Point) -> None:
        self.primitives.append(("line", p))

    def cubic_to(self, c1: Point, c2: Point, p: Point) -> None:
        self.primitives.append(("cubic", c1, c2, p))

    @property
    def end(self) -> Point:
        if not self.primitives:
            return self.start
        return self.primitives[-1][-1]


def _num(el: SvgElement, name: str, default: float = 0.0) -> float:
    value = el.get(name)
    if value is None:
        return default
    parsed = value.parsed
    if isinstance(parsed, NumberList) and len(parsed) == 1:
        return parsed.values[0]
    if isinstance(parsed, Opaque):
        raw = parsed.text.strip()
        if raw.endswith("px"):
            try:
                return float(raw[:-2])
            except ValueError:
                pass
    raise GeometryError(f"bad numeric attribute {name}={value.raw!r} on <{el.tag}>")


def _number_pairs(el: SvgElement, name: str) -> list[Point]:
    value = el.get(name)
    if value is None:
        return []
    parsed = value.parsed
    if not isinstance(parsed, NumberList) or len(parsed) % 2 != 0:
        raise GeometryError(f"bad point list {name}={value.raw!r} on <{el.tag}>")
    vals = parsed.values
    return [(vals[i], vals[i + 1]) for i in range(0, len(vals), 2)]


def ellipse_subpath(cx: float, cy: float, rx: float, ry: float) -> Subpath:
    kx, ky = KAPPA * rx, KAPPA * ry
    sp = Subpath(start=(cx + rx, cy))
    sp.cubic_to((cx + rx, cy + ky), (cx + kx, cy + ry), (cx, cy + ry))
    sp.cubic_to((cx - kx, cy + ry), (cx - rx, cy + ky), (cx - rx, cy))
    sp.cubic_to((cx - rx, cy - ky), (cx - kx, cy - ry), (cx, cy - ry))
    sp.cubic_to((cx + kx, cy - ry), (cx + rx, cy - ky), (cx + rx, cy))
    sp.closed = True
    return sp


def rect_subpath(x, y, w, h, rx, ry) -> Subpath:
    if rx <= 0 and ry <= 0:
        sp = Subpath(start=(x, y))
        sp.line_to((x + w, y))
        sp.line_to((x + w, y + h))
        sp.line_to((x, y + h))
        sp.closed = True
        return sp
    if rx <= 0:
        rx = ry
    if ry <= 0:
        ry = rx
    rx = min(rx, w / 2.0)
    ry = min(ry, h / 2.0)
    kx, ky = KAPPA * rx, KAPPA * ry
    sp = Subpath(start=(x + rx, y))
    sp.line_to((x + w - rx, y))
    sp.cubic_to((x + w - rx + kx, y), (x + w, y + ry - ky), (x + w, y + ry))
    sp.line_to((x + w, y + h - ry))
    sp.cubic_to((x + w, y + h - ry + ky), (x + w - rx + kx, y + h), (x + w - rx, y + h))
    sp.line_to((x + rx, y + h))
    sp.cubic_to((x + rx - kx, y + h), (x, y + h - ry + ky), (x, y + h - ry))
    sp.line_to((x, y + ry))
    sp.cubic_to((x, y + ry - ky), (x + rx - kx, y), (x + rx, y))
    sp.closed = True
    return sp


def shape_subpaths(el: SvgElement) -> list[Subpath]:
    """Geometry of a shape element.  Raises GeometryError on invalid shapes."""
    tag = el.tag
    if tag == "circle":
        r = _num(el, "r")
        if r < 0:
            raise GeometryError("negative circle radius")
        if r == 0:
            return []
        return [ellipse_subpath(_num(el, "cx"), _num(el, "cy"), r, r)]
    if tag == "ellipse":
        rx, ry = _num(el, "rx"), _num(el, "ry")
        if rx < 0 or ry < 0:
            raise GeometryError("negative ellipse radius")
        if rx == 0 or ry == 0:
            return []
        return [ellipse_subpath(_num(el, "cx"), _num(el, "cy"), rx, ry)]
    if tag == "rect":
        w, h = _num(el, "width"), _num(el, "height")
        if w < 0 or h < 0:
            raise GeometryError("negative rect size")
        if w == 0 or h == 0:
            return []
        return [
            rect_subpath(
                _num(el, "x"), _num(el, "y"), w, h, _num(el, "rx"), _num(el, "ry")
            )
        ]
    if tag == "line":
        sp = Subpath(start=(_num(el, "x1"), _num(el, "y1")))
        sp.line_to((_num(el, "x2"), _num(el, "y2")))
        return [sp]
    if tag in ("polyline", "polygon"):
        pts = _number_pairs(el, "points")
        if len(pts) < 2:
            if el.get("points") is None or len(pts) == 0:
                return []
            raise GeometryError("polyline needs at least two points")
        sp = Subpath(start=pts[0])
        for p in pts[1:]:
            sp.line_to(p)
        sp.closed = tag == "polygon"
        return [sp]
    if tag == "path":
        value = el.get("d")
        if value is None:
            return []
        if not isinstance(value.parsed, PathData):
            raise GeometryError(f"invalid path data: {value.raw!r}")
        return path_subpaths(value.parsed)
    raise GeometryError(f"<{el.tag}> is not a shape")


def path_subpaths(path: PathData) -> list[Subpath]:
    subpaths: list[Subpath] = []
    current: Subpath | None = None
    cx, cy = 0.0, 0.0  # current point
    sx, sy = 0.0, 0.0  # subpath start
    last_cubic_ctrl: Point | None = None
    last_quad_ctrl: Point | None = None

    def flush() -> None:
        nonlocal current
        if current is not None and (current.primitives or current.closed):
            subpaths.append(current)
        current = None

    for cmd in path.commands:
        op, args = cmd.op, cmd.args
        rel = op.islower()
        upper = op.upper()
        new_cubic_ctrl = None
        new_quad_ctrl = None

        if upper == "M":
            x, y = args
            if rel:
                x, y = cx + x, cy + y
            flush()
            current = Subpath(start=(x, y))
            cx, cy, sx, sy = x, y, x, y
        elif upper == "Z":
            if current is not None:
                current.closed = True
                flush()
            cx, cy = sx, sy
            current = Subpath(start=(sx, sy))
        else:
            if current is None:
                current = Subpath(start=(cx, cy))
            if upper == "L":
                x, y = args
                if rel:
                    x, y = cx + x, cy + y
                current.line_to((x, y))
                cx, cy = x, y
            elif upper == "H":
                x = cx + args[0] if rel else args[0]
                current.line_to((x, cy))
                cx = x
            elif upper == "V":
                y = cy + args[0] if rel else args[0]
                current.line_to((cx, y))
                cy = y
            elif upper in ("C", "S"):
                if upper == "C":
                    x1, y1, x2, y2, x, y = args
                    if rel:
                        x1, y1 = cx + x1, cy + y1
                        x2, y2 = cx + x2, cy + y2
                        x, y = cx + x, cy + y
                else:
                    x2, y2, x, y = args
                    if rel:
                        x2, y2 = cx + x2, cy + y2
                        x, y = cx + x, cy + y
                    if last_cubic_ctrl is not None:
                        x1, y1 = 2 * cx - last_cubic_ctrl[0], 2 * cy - last_cubic_ctrl[1]
                    else:
                        x1, y1 = cx, cy
                current.cubic_to((x1, y1), (x2, y2), (x, y))
                new_cubic_ctrl = (x2, y2)
                cx, cy = x, y
            elif upper in ("Q", "T"):
                if upper == "Q":
                    qx, qy, x, y = args
                    if rel:
                        qx, qy = cx + qx, cy + qy
                        x, y = cx + x, cy + y
                else:
                    x, y = args
                    if rel:
                        x, y = cx + x, cy + y
                    if last_quad_ctrl is not None:
                        qx, qy = 2 * cx - last_quad_ctrl[0], 2 * cy - last_quad_ctrl[1]
                    else:
                        qx, qy = cx, cy
                c1 = (cx + 2.0 / 3.0 * (qx - cx), cy + 2.0 / 3.0 * (qy - cy))
                c2 = (x + 2.0 / 3.0 * (qx - x), y + 2.0 / 3.0 * (qy - y))
                current.cubic_to(c1, c2, (x, y))
                new_quad_ctrl = (qx, qy)
                cx, cy = x, y
            elif upper == "A":
                rx, ry, rot, laf, sf, x, y = args
                if rel:
                    x, y = cx + x, cy + y
                for c1, c2, p in arc_to_cubics(
                    (cx, cy), (x, y), rx, ry, rot, bool(laf), bool(sf)
                ):
                    current.cubic_to(c1, c2, p)
                cx, cy = x, y
        last_cubic_ctrl = new_cubic_ctrl
        last_quad_ctrl = new_quad_ctrl

    flush()
    return [sp for sp in subpaths if sp.primitives]


def arc_to_cubics(
    p0: Point, p1: Point, rx: float, ry: float, x_rot_deg: float,
    large_arc: bool, sweep: bool,
) -> list[tuple[Point, Point, Point]]:
    """SVG endpoint arc -> cubic segments (center parameterization per the
    SVG implementation notes, split at <= 90 degree spans)."""
    if p0 == p1:
        return []
    rx, ry = abs(rx), abs(ry)
    if rx == 0 or ry == 0:
        return [( p0, p1, p1 )]  # straight line as degenerate cubic
    phi = math.radians(x_rot_deg % 360.0)
    cos_phi, sin_phi = math.cos(phi), math.sin(phi)
    dx2, dy2 = (p0[0] - p1[0]) / 2.0, (p0[1] - p1[1]) / 2.0
    x1p = cos_phi * dx2 + sin_phi * dy2
    y1p = -sin_phi * dx2 + cos_phi * dy2
    # scale radii up if the endpoints cannot be joined
    lam = (x1p / rx) ** 2 + (y1p / ry) ** 2
    if lam > 1.0:
        s = math.sqrt(lam)
        rx, ry = rx * s, ry * s
    num = rx * rx * ry * ry - rx * rx * y1p * y1p - ry * ry * x1p * x1p
    den = rx * rx * y1p * y1p + ry * ry * x1p * x1p
    radicand = max(0.0, num / den)
    coef = math.sqrt(radicand)
    if large_arc == sweep:
        coef = -coef
    cxp = coef * rx * y1p / ry
    cyp = -coef * ry * x1p / rx
    ccx = cos_phi * cxp - sin_phi * cyp + (p0[0] + p1[0]) / 2.0
    ccy = sin_phi * cxp + cos_phi * cyp + (p0[1] + p1[1]) / 2.0

    def angle(ux, uy, vx, vy):
        dot = ux * vx + uy * vy
        norm = math.hypot(ux, uy) * math.hypot(vx, vy)
        a = math.acos(max(-1.0, min(1.0, dot / norm)))
        if ux * vy - uy * vx < 0:
            a = -a
        return a

    theta1 = angle(1.0, 0.0, (x1p - cxp) / rx, (y1p - cyp) / ry)
    dtheta = angle(
        (x1p - cxp) / rx, (y1p - cyp) / ry, (-x1p - cxp) / rx, (-y1p - cyp) / ry
    )
    if not sweep and dtheta > 0:
        dtheta -= 2 * math.pi
    elif sweep and dtheta < 0:
        dtheta += 2 * math.pi

    segments = max(1, int(math.ceil(abs(dtheta) / (math.pi / 2.0))))
    out = []
    delta = dtheta / segments
    # tangent length for a cubic approximating a <= 90 degree elliptical span
    alpha = (
        math.sin(delta)
        * (math.sqrt(4.0 + 3.0 * math.tan(delta / 2.0) ** 2) - 1.0)
        / 3.0
    )

    def point_and_deriv(theta):
        ct, st = math.cos(theta), math.sin(theta)
        x = ccx + rx * ct * cos_phi - ry * st * sin_phi
        y = ccy + rx * ct * sin_phi + ry * st * cos_phi
        dxdt = -rx * st * cos_phi - ry * ct * sin_phi
        dydt = -rx * st * sin_phi + ry * ct * cos_phi
        return (x, y), (dxdt, dydt)

    t = theta1
    prev_pt, prev_dv = point_and_deriv(t)
    for _ in range(segments):
        t2 = t + delta
        next_pt, next_dv = point_and_deriv(t2)
        c1 = (prev_pt[0] + alpha * prev_dv[0], prev_pt[1] + alpha * prev_dv[1])
        c2 = (next_pt[0] - alpha * next_dv[0], next_pt[1] - alpha * next_dv[1])
        out.append((c1, c2, next_pt))
        t, prev_pt, prev_dv = t2, next_pt, next_dv
    return out
