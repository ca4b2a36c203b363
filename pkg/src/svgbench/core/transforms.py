"""2x3 affine matrices and SVG transform-list parsing/serialization."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

_FUNC_RE = re.compile(r"(matrix|translate|scale|rotate|skewX|skewY)\s*\(([^)]*)\)")
_NUM_RE = re.compile(r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?")

_ARG_COUNTS = {
    "matrix": (6,),
    "translate": (1, 2),
    "scale": (1, 2),
    "rotate": (1, 3),
    "skewX": (1,),
    "skewY": (1,),
}


@dataclass(frozen=True)
class TransformMatrix:
    """Affine map ``(x, y) -> (a x + c y + e, b x + d y + f)``."""

    a: float = 1.0
    b: float = 0.0
    c: float = 0.0
    d: float = 1.0
    e: float = 0.0
    f: float = 0.0

    @staticmethod
    def identity() -> "TransformMatrix":
        return TransformMatrix()

    @staticmethod
    def translation(tx: float, ty: float = 0.0) -> "TransformMatrix":
        return TransformMatrix(1, 0, 0, 1, tx, ty)

    @staticmethod
    def scaling(sx: float, sy: float | None = None) -> "TransformMatrix":
        return TransformMatrix(sx, 0, 0, sx if sy is None else sy, 0, 0)

    @staticmethod
    def rotation(degrees: float, px: float = 0.0, py: float = 0.0) -> "TransformMatrix":
        rad = math.radians(degrees)
        cos, sin = math.cos(rad), math.sin(rad)
        rot = TransformMatrix(cos, sin, -sin, cos, 0, 0)
        if px or py:
            return (
                TransformMatrix.translation(px, py)
                @ rot
                @ TransformMatrix.translation(-px, -py)
            )
        return rot

    @staticmethod
    def skew_x(degrees: float) -> "TransformMatrix":
        return TransformMatrix(1, 0, math.tan(math.radians(degrees)), 1, 0, 0)

    @staticmethod
    def skew_y(degrees: float) -> "TransformMatrix":
        return TransformMatrix(1, math.tan(math.radians(degrees)), 0, 1, 0, 0)

    def __matmul__(self, other: "TransformMatrix") -> "TransformMatrix":
        """``self @ other`` applies ``other`` first, then ``self``."""
        return TransformMatrix(
            a=self.a * other.a + self.c * other.b,
            b=self.b * other.a + self.d * other.b,
            c=self.a * other.c + self.c * other.d,
            d=self.b * other.c + self.d * other.d,
            e=self.a * other.e + self.c * other.f + self.e,
            f=self.b * other.e + self.d * other.f + self.f,
        )

    def apply(self, x: float, y: float) -> tuple[float, float]:
        return (self.a * x + self.c * y + self.e, self.b * x + self.d * y + self.f)

    def is_identity(self, tol: float = 0.0) -> bool:
        return (
            abs(self.a - 1) <= tol
            and abs(self.b) <= tol
            and abs(self.c) <= tol
            and abs(self.d - 1) <= tol
            and abs(self.e) <= tol
            and abs(self.f) <= tol
        )

    def uniform_scale(self) -> float:
        """Geometric mean scale factor; exact for uniform-scale maps."""
        det = abs(self.a * self.d - self.b * self.c)
        return math.sqrt(det)


@dataclass(frozen=True)
class TransformEntry:
    """One transform-list item in its source form."""

    func: str
    args: tuple[float, ...]

    def matrix(self) -> TransformMatrix:
        f, a = self.func, self.args
        if f == "matrix":
            return TransformMatrix(*a)
        if f == "translate":
            return TransformMatrix.translation(a[0], a[1] if len(a) > 1 else 0.0)
        if f == "scale":
            return TransformMatrix.scaling(a[0], a[1] if len(a) > 1 else None)
        if f == "rotate":
            if len(a) == 3:
                return TransformMatrix.rotation(a[0], a[1], a[2])
            return TransformMatrix.rotation(a[0])
        if f == "skewX":
            return TransformMatrix.skew_x(a[0])
        if f == "skewY":
            return TransformMatrix.skew_y(a[0])
        raise ValueError(f"unknown transform function {f!r}")


@dataclass(frozen=True)
class TransformList:
    entries: tuple[TransformEntry, ...]

    @staticmethod
    def parse(text: str) -> "TransformList":
        entries: list[TransformEntry] = []
        pos = 0
        for m in _FUNC_RE.finditer(text):
            between = text[pos : m.start()]
            if between.strip(" ,\t\n\r"):
                raise ValueError(f"garbage in transform list: {between!r}")
            func = m.group(1)
            args = tuple(float(x) for x in _NUM_RE.findall(m.group(2)))
            if len(args) not in _ARG_COUNTS[func]:
                raise ValueError(
                    f"{func} takes {_ARG_COUNTS[func]} args, got {len(args)}"
                )
            entries.append(TransformEntry(func, args))
            pos = m.end()
        if text[pos:].strip(" ,\t\n\r"):
            raise ValueError(f"garbage in transform list: {text[pos:]!r}")
        if not entries:
            raise ValueError("empty transform list")
        return TransformList(tuple(entries))

    def matrix(self) -> TransformMatrix:
        out = TransformMatrix.identity()
        for entry in self.entries:
            out = out @ entry.matrix()
        return out

    def to_string(self, precision: int = 2) -> str:
        from .serializer import format_number

        parts = []
        for entry in self.entries:
            args = " ".join(format_number(v, precision) for v in entry.args)
            parts.append(f"{entry.func}({args})")
        return " ".join(parts)

    def conjugate(self, scale: float, cx: float, cy: float) -> "TransformList":
        """Rewrite each entry T as N T N^-1 for N(p) = scale * p + (cx, cy).

        translate and pivotless rotate keep their form (translation scales,
        rotation gains the mapped pivot); anything else collapses to its
        conjugated matrix.  Conjugating entry-wise is sound because
        N T1 T2 N^-1 = (N T1 N^-1)(N T2 N^-1).
        """
        out: list[TransformEntry] = []
        for entry in self.entries:
            if entry.func == "translate":
                tx = entry.args[0] * scale
                ty = (entry.args[1] if len(entry.args) > 1 else 0.0) * scale
                out.append(TransformEntry("translate", (tx, ty)))
                continue
            if entry.func == "rotate":
                angle = entry.args[0]
                if len(entry.args) == 3:
                    px, py = entry.args[1], entry.args[2]
                else:
                    px, py = 0.0, 0.0
                out.append(
                    TransformEntry(
                        "rotate", (angle, px * scale + cx, py * scale + cy)
                    )
                )
                continue
            m = entry.matrix()
            # N T N^-1 keeps the linear part, maps translation through
            # t' = s*t + (I - A) c
            e = scale * m.e + (1 - m.a) * cx - m.c * cy
            f = scale * m.f - m.b * cx + (1 - m.d) * cy
            out.append(TransformEntry("matrix", (m.a, m.b, m.c, m.d, e, f)))
        return TransformList(tuple(out))

    def map_numbers(self, fn) -> "TransformList":
        return TransformList(
            tuple(
                TransformEntry(e.func, tuple(fn(v) for v in e.args))
                for e in self.entries
            )
        )
