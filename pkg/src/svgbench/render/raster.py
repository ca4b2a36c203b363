"""Scanline coverage rasterization.

Fills are computed as exact signed areas: every edge segment is subdivided
at integer x and y grid crossings so each piece lies inside a single pixel
cell, the piece deposits its signed-area contribution into that cell (plus
the winding carry into the next column), and a cumulative sum along x turns
deposits into per-pixel winding coverage.  This is the classic font
rasterizer scheme (see font-rs / pathfinder), vectorized over all pieces at
once, and gives analytic antialiasing with no sample grid.

Strokes are converted to outline polygons (offset both sides with joins and
caps) and filled with the nonzero rule.
"""

from __future__ import annotations

import math

import numpy as np

FILL_NONZERO = "nonzero"
FILL_EVENODD = "evenodd"

# device-space flattening tolerance, px
FLATTEN_TOL = 0.1
_MAX_FLATTEN_SEGS = 256


def coverage_slab(
    segments: np.ndarray, width: int, height: int, fill_rule: str = FILL_NONZERO
):
    """Coverage restricted to the segments' bounding rows/columns.

    Returns ``(cov, y0, x0)`` with ``cov`` a float array whose [i, j] is the
    coverage of canvas pixel (y0 + i, x0 + j), or None when nothing is
    covered.  All pixel-cell arithmetic happens in global canvas
    coordinates; the slab only crops storage, so results are bit-identical
    to a full-canvas evaluation.
    """
    if segments.size == 0:
        return None

    x0, y0, x1, y1 = (segments[:, i].astype(np.float64) for i in range(4))
    keep = y0 != y1
    x0, y0, x1, y1 = x0[keep], y0[keep], x1[keep], y1[keep]
    if x0.size == 0:
        return None

    # parametric clip to the canvas y-range; x never needs clipping because
    # out-of-range cells are handled at deposit time
    t_at0 = (0.0 - y0) / (y1 - y0)
    t_ath = (float(height) - y0) / (y1 - y0)
    t_lo = np.clip(np.minimum(t_at0, t_ath), 0.0, 1.0)
    t_hi = np.clip(np.maximum(t_at0, t_ath), 0.0, 1.0)
    keep = t_hi > t_lo
    if not np.any(keep):
        return None
    x0, y0, x1, y1 = x0[keep], y0[keep], x1[keep], y1[keep]
    t_lo, t_hi = t_lo[keep], t_hi[keep]
    dx, dy = x1 - x0, y1 - y0
    ax, ay = x0 + t_lo * dx, y0 + t_lo * dy
    bx, by = x0 + t_hi * dx, y0 + t_hi * dy

    row0 = int(max(0, math.floor(min(ay.min(), by.min()))))
    row1 = int(min(height, math.ceil(max(ay.max(), by.max()))))
    col0 = int(min(max(0, math.floor(min(ax.min(), bx.min()))), width))
    col1 = int(min(width, max(col0, math.ceil(max(ax.max(), bx.max())))))
    if row0 >= row1:
        return None
    slab_h, slab_w = row1 - row0, col1 - col0
    if slab_w == 0:
        # everything at/right of the right edge contributes nothing;
        # everything left of 0 would have col0 == 0 < col1
        return None

    seg_id, ts = _grid_crossings(ax, ay, bx, by)
    pax, pay = ax[seg_id], ay[seg_id]
    pdx, pdy = (bx - ax)[seg_id], (by - ay)[seg_id]
    px = pax + ts * pdx
    py = pay + ts * pdy
    # consecutive boundaries within a segment bound one piece
    same = seg_id[1:] == seg_id[:-1]
    exa, eya = px[:-1][same], py[:-1][same]
    exb, eyb = px[1:][same], py[1:][same]

    d = eyb - eya
    live = d != 0.0
    exa, exb, d = exa[live], exb[live], d[live]
    ym = 0.5 * (eya[live] + eyb[live])
    xm = 0.5 * (exa + exb)
    ix = np.floor(xm).astype(np.int64)
    iy = np.clip(np.floor(ym).astype(np.int64), row0, row1 - 1) - row0

    stride = slab_w + 1
    size = slab_h * stride
    left = ix < col0  # only possible when col0 == 0 and the piece is off-canvas
    mid = (~left) & (ix < col1)
    flat_parts = []
    weight_parts = []
    if np.any(mid):
        xmf = xm[mid] - ix[mid]
        loc = iy[mid] * stride + (ix[mid] - col0)
        flat_parts.extend([loc, loc + 1])
        weight_parts.extend([d[mid] * (1.0 - xmf), d[mid] * xmf])
    if np.any(left):
        flat_parts.append(iy[left] * stride)
        weight_parts.append(d[left])
    if not flat_parts:
        return None
    flat = np.concatenate(flat_parts)
    weights = np.concatenate(weight_parts)
    deposits = np.bincount(flat, weights=weights, minlength=size).reshape(
        slab_h, stride
    )

    acc = np.cumsum(deposits, axis=1)[:, :slab_w]
    if fill_rule == FILL_EVENODD:
        np.abs(np.remainder(acc + 1.0, 2.0) - 1.0, out=acc)
    else:
        np.abs(acc, out=acc)
        np.minimum(acc, 1.0, out=acc)
    # wash out accumulation noise so empty rows stay exactly empty
    acc[acc < 1e-9] = 0.0
    np.minimum(acc, 1.0, out=acc)
    return acc, row0, col0


def fill_coverage(
    segments: np.ndarray, width: int, height: int, fill_rule: str = FILL_NONZERO
) -> np.ndarray:
    """Full-canvas coverage in [0, 1] for the polygon soup ``segments``
    ((N, 4) array of x0, y0, x1, y1 in device pixels)."""
    cov = np.zeros((height, width), dtype=np.float64)
    slab = coverage_slab(segments, width, height, fill_rule)
    if slab is not None:
        acc, row0, col0 = slab
        cov[row0 : row0 + acc.shape[0], col0 : col0 + acc.shape[1]] = acc
    return cov


def _grid_crossings(ax, ay, bx, by) -> tuple[np.ndarray, np.ndarray]:
    """Sorted (segment id, t) boundaries: 0, 1 and every integer x/y crossing."""
    n = ax.size
    parts_id = [np.arange(n, dtype=np.int64), np.arange(n, dtype=np.int64)]
    parts_t = [np.zeros(n), np.ones(n)]
    for lo, hi, a, b in (
        (np.minimum(ay, by), np.maximum(ay, by), ay, by),
        (np.minimum(ax, bx), np.maximum(ax, bx), ax, bx),
    ):
        first = np.floor(lo) + 1.0
        count = np.maximum(0.0, np.ceil(hi) - np.floor(lo) - 1.0).astype(np.int64)
        delta = b - a
        count = np.where(delta == 0.0, 0, count)
        total = int(count.sum())
        if total == 0:
            continue
        seg = np.repeat(np.arange(n, dtype=np.int64), count)
        starts = np.cumsum(count) - count
        offsets = np.arange(total, dtype=np.int64) - np.repeat(starts, count)
        k = first[seg] + offsets
        t = (k - a[seg]) / delta[seg]
        parts_id.append(seg)
        parts_t.append(t)
    seg_id = np.concatenate(parts_id)
    ts = np.concatenate(parts_t)
    order = np.lexsort((ts, seg_id))
    return seg_id[order], ts[order]


# ---------------------------------------------------------------------------
# curve flattening
# ---------------------------------------------------------------------------

def cubic_segment_count(p0, p1, p2, p3, tol: float = FLATTEN_TOL) -> int:
    """Wang's bound on subdivisions needed for a max deviation of ``tol``."""
    d1 = math.hypot(p0[0] - 2 * p1[0] + p2[0], p0[1] - 2 * p1[1] + p2[1])
    d2 = math.hypot(p1[0] - 2 * p2[0] + p3[0], p1[1] - 2 * p2[1] + p3[1])
    d = max(d1, d2)
    if d <= 1e-12:
        return 1
    n = int(math.ceil(math.sqrt(3.0 * d / (4.0 * tol))))
    return min(max(n, 1), _MAX_FLATTEN_SEGS)


def flatten_cubic(p0, p1, p2, p3, tol: float = FLATTEN_TOL) -> np.ndarray:
    """Points after p0 along the curve, shape (n, 2)."""
    n = cubic_segment_count(p0, p1, p2, p3, tol)
    t = np.linspace(0.0, 1.0, n + 1)[1:]
    mt = 1.0 - t
    c0 = mt * mt * mt
    c1 = 3.0 * mt * mt * t
    c2 = 3.0 * mt * t * t
    c3 = t * t * t
    x = c0 * p0[0] + c1 * p1[0] + c2 * p2[0] + c3 * p3[0]
    y = c0 * p0[1] + c1 * p1[1] + c2 * p2[1] + c3 * p3[1]
    return np.stack([x, y], axis=1)


def polyline_segments(points: np.ndarray, close: bool) -> np.ndarray:
    """Consecutive point pairs as an (N, 4) segment array."""
    if len(points) < 2:
        return np.zeros((0, 4))
    a = points[:-1]
    b = points[1:]
    segs = np.concatenate([a, b], axis=1)
    if close and not np.array_equal(points[0], points[-1]):
        closing = np.concatenate([points[-1], points[0]])[None, :]
        segs = np.concatenate([segs, closing], axis=0)
    return segs


# ---------------------------------------------------------------------------
# stroking
# ---------------------------------------------------------------------------

CAP_BUTT = "butt"
CAP_ROUND = "round"
CAP_SQUARE = "square"
JOIN_MITER = "miter"
JOIN_ROUND = "round"
JOIN_BEVEL = "bevel"


def _arc_points(center, radius, a0, a1, ccw: bool) -> list[tuple[float, float]]:
    """Points along a circular arc, endpoints excluded."""
    if ccw:
        while a1 < a0:
            a1 += 2 * math.pi
    else:
        while a1 > a0:
            a1 -= 2 * math.pi
    sweep = a1 - a0
    steps = max(1, int(abs(sweep) / 0.25))
    out = []
    for i in range(1, steps):
        a = a0 + sweep * i / steps
        out.append((center[0] + radius * math.cos(a), center[1] + radius * math.sin(a)))
    return out


def _dedupe(points: np.ndarray) -> np.ndarray:
    if len(points) < 2:
        return points
    keep = np.ones(len(points), dtype=bool)
    diffs = np.abs(points[1:] - points[:-1]).sum(axis=1)
    keep[1:] = diffs > 1e-9
    return points[keep]


def stroke_outline(
    points: np.ndarray,
    closed: bool,
    half_width: float,
    linecap: str = CAP_BUTT,
    linejoin: str = JOIN_MITER,
    miterlimit: float = 4.0,
) -> list[np.ndarray]:
    """Outline ring(s) of a stroked polyline, each as an (n, 2) point loop."""
    pts = _dedupe(np.asarray(points, dtype=np.float64))
    if closed and len(pts) > 2 and np.allclose(pts[0], pts[-1]):
        pts = pts[:-1]
    if len(pts) < 2:
        if len(pts) == 1 and linecap == CAP_ROUND:
            # degenerate dot
            center = pts[0]
            ring = [
                (
                    center[0] + half_width * math.cos(a),
                    center[1] + half_width * math.sin(a),
                )
                for a in np.linspace(0, 2 * math.pi, 17)[:-1]
            ]
            return [np.array(ring)]
        return []

    def side(path_pts: np.ndarray, wrap: bool) -> list[tuple[float, float]]:
        """Left offset of the path, with joins at interior vertices."""
        out: list[tuple[float, float]] = []
        m = len(path_pts)
        seg_count = m if wrap else m - 1
        normals = []
        for i in range(seg_count):
            p, q = path_pts[i], path_pts[(i + 1) % m]
            vx, vy = q[0] - p[0], q[1] - p[1]
            norm = math.hypot(vx, vy)
            if norm < 1e-12:
                normals.append(None)
                continue
            normals.append((-vy / norm * half_width, vx / norm * half_width))
        prev_n = None
        for i in range(seg_count):
            nrm = normals[i]
            if nrm is None:
                continue
            p, q = path_pts[i], path_pts[(i + 1) % m]
            start = (p[0] + nrm[0], p[1] + nrm[1])
            if prev_n is not None:
                out.extend(_join(p, prev_n, nrm, half_width, linejoin, miterlimit))
            out.append(start)
            out.append((q[0] + nrm[0], q[1] + nrm[1]))
            prev_n = nrm
        if wrap and out:
            first_n = next((x for x in normals if x is not None), None)
            if first_n is not None and prev_n is not None:
                out.extend(
                    _join(path_pts[0], prev_n, first_n, half_width, linejoin, miterlimit)
                )
        return out

    if closed:
        outer = side(pts, wrap=True)
        inner = side(pts[::-1], wrap=True)
        rings = []
        if len(outer) >= 3:
            rings.append(np.array(outer))
        if len(inner) >= 3:
            rings.append(np.array(inner))
        return rings

    forward = side(pts, wrap=False)
    backward = side(pts[::-1], wrap=False)
    if not forward or not backward:
        return []
    ring: list[tuple[float, float]] = list(forward)
    ring.extend(_cap(pts[-1], forward[-1], backward[0], half_width, linecap))
    ring.extend(backward)
    ring.extend(_cap(pts[0], backward[-1], forward[0], half_width, linecap))
    return [np.array(ring)]


def _join(vertex, n_prev, n_next, hw, linejoin, miterlimit):
    cross = n_prev[0] * n_next[1] - n_prev[1] * n_next[0]
    if abs(cross) < 1e-12:
        return []
    if linejoin == JOIN_ROUND:
        a0 = math.atan2(n_prev[1], n_prev[0])
        a1 = math.atan2(n_next[1], n_next[0])
        pts = _arc_points(vertex, hw, a0, a1, ccw=cross > 0)
        return pts
    if linejoin == JOIN_MITER:
        # miter point sits on the normal bisector at distance hw / cos(half
        # angle); the miter-length ratio 1/cos(half) is capped by miterlimit
        dot = (n_prev[0] * n_next[0] + n_prev[1] * n_next[1]) / (hw * hw)
        cos_half_sq = (1.0 + dot) / 2.0
        if cos_half_sq > 1e-9 and 1.0 / cos_half_sq <= miterlimit * miterlimit:
            mx = n_prev[0] + n_next[0]
            my = n_prev[1] + n_next[1]
            bis = math.hypot(mx, my)
            if bis > 1e-12:
                miter_len = hw / math.sqrt(cos_half_sq)
                return [
                    (
                        vertex[0] + mx / bis * miter_len,
                        vertex[1] + my / bis * miter_len,
                    )
                ]
    # bevel: straight connection (implicit, consecutive offset points)
    return []


def _cap(end, from_pt, to_pt, hw, linecap):
    if linecap == CAP_ROUND:
        # from_pt is end + n, to_pt is end - n; sweeping the angle downward
        # by pi passes through the outward tangent direction
        a0 = math.atan2(from_pt[1] - end[1], from_pt[0] - end[0])
        a1 = math.atan2(to_pt[1] - end[1], to_pt[0] - end[0])
        return _arc_points(end, hw, a0, a1, ccw=False)
    if linecap == CAP_SQUARE:
        dx = from_pt[0] - end[0]
        dy = from_pt[1] - end[1]
        # outward direction is the edge tangent; from/to offsets are normal
        # to it, so rotate the offset by -90 deg to get the extension
        ex, ey = dy, -dx
        return [
            (from_pt[0] + ex, from_pt[1] + ey),
            (to_pt[0] + ex, to_pt[1] + ey),
        ]
    return []
