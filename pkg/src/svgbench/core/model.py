"""Element-tree model for SVG documents.

The tree keeps tags, attribute order, children and character data exactly as
parsed.  Attribute values carry both the raw string and, where the attribute
is geometric, a typed form (number list, path data, transform list, color)
that transforms can operate on.  Everything is treated as immutable after
construction; "edits" build new trees via ``clone``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

from .colors import Color
from .pathdata import PathData
from .transforms import TransformList

# Tag inventory the toolkit understands.  Anything else (or any prefixed
# name like inkscape:foo) is carried through parse/serialize as a foreign
# subtree and dropped by the simplifier.
KNOWN_TAGS = frozenset(
    {
        "svg", "defs", "use", "g",
        "path", "rect", "circle", "ellipse", "line", "polyline", "polygon",
        "text", "tspan", "textPath",
        "linearGradient", "radialGradient", "stop",
        "clipPath", "mask",
        "filter", "feGaussianBlur", "feColorMatrix", "feComposite", "feBlend",
        "animate", "animateMotion", "animateTransform",
        "metadata", "title", "desc", "style", "symbol", "marker",
        "pattern", "image", "switch", "set", "mpath",
    }
)

SHAPE_TAGS = frozenset(
    {"path", "rect", "circle", "ellipse", "line", "polyline", "polygon"}
)

ANIMATION_TAGS = frozenset({"animate", "animateMotion", "animateTransform", "set"})

COMMENT_TAG = "#comment"

# Attributes whose values are plain numbers or whitespace/comma separated
# number lists.
_NUMBER_LIST_ATTRS = frozenset(
    {
        "x", "y", "x1", "y1", "x2", "y2", "cx", "cy", "r", "rx", "ry",
        "width", "height", "viewBox", "points", "opacity", "fill-opacity",
        "stroke-opacity", "stroke-width", "stroke-miterlimit", "offset",
        "stop-opacity", "font-size", "stdDeviation", "fx", "fy",
    }
)

_COLOR_ATTRS = frozenset({"fill", "stroke", "stop-color", "color", "flood-color"})


ParsedValue = Union["NumberList", PathData, TransformList, Color, "Opaque"]


@dataclass(frozen=True)
class NumberList:
    values: tuple[float, ...]

    def __iter__(self) -> Iterator[float]:
        return iter(self.values)

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class Opaque:
    text: str


@dataclass(frozen=True)
class AttrValue:
    """One attribute value: raw text plus its typed interpretation."""

    raw: str
    parsed: ParsedValue

    @staticmethod
    def of(name: str, raw: str) -> "AttrValue":
        """Classify and parse ``raw`` according to the attribute name.

        Values that fail their grammar degrade to Opaque rather than raising:
        whether a bad value matters is decided by the renderer, not the parser.
        """
        if name == "d":
            try:
                return AttrValue(raw, PathData.parse(raw))
            except ValueError:
                return AttrValue(raw, Opaque(raw))
        if name in ("transform", "gradientTransform", "patternTransform"):
            try:
                return AttrValue(raw, TransformList.parse(raw))
            except ValueError:
                return AttrValue(raw, Opaque(raw))
        if name in _NUMBER_LIST_ATTRS:
            nums = _parse_number_list(raw)
            if nums is not None:
                return AttrValue(raw, NumberList(tuple(nums)))
            return AttrValue(raw, Opaque(raw))
        if name in _COLOR_ATTRS:
            color = Color.parse(raw)
            if color is not None:
                return AttrValue(raw, color)
            return AttrValue(raw, Opaque(raw))
        return AttrValue(raw, Opaque(raw))

    def with_raw_of_parsed(self, precision: int = 2) -> str:
        """Serialize the typed form back to attribute text."""
        from .serializer import format_number

        p = self.parsed
        if isinstance(p, NumberList):
            return " ".join(format_number(v, precision) for v in p.values)
        if isinstance(p, PathData):
            return p.to_string(precision)
        if isinstance(p, TransformList):
            return p.to_string(precision)
        if isinstance(p, Color):
            return p.raw
        return p.text


_NUM_RE = __import__("re").compile(
    r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?"
)


def _parse_number_list(raw: str) -> Optional[list[float]]:
    stripped = raw.strip()
    if not stripped:
        return None
    parts = _NUM_RE.findall(stripped)
    if not parts:
        return None
    # reject if the attribute has non-numeric residue (units, percents, ...)
    residue = _NUM_RE.sub("", stripped).replace(",", " ").strip()
    if residue:
        return None
    try:
        return [float(p) for p in parts]
    except ValueError:
        return None


@dataclass
class SvgElement:
    """A single element: tag, ordered attributes, children, optional text."""

    tag: str
    attrs: list[tuple[str, AttrValue]] = field(default_factory=list)
    children: list["SvgElement"] = field(default_factory=list)
    text: Optional[str] = None

    @property
    def is_comment(self) -> bool:
        return self.tag == COMMENT_TAG

    @property
    def is_foreign(self) -> bool:
        return ":" in self.tag or (
            self.tag not in KNOWN_TAGS and not self.is_comment
        )

    def get(self, name: str) -> Optional[AttrValue]:
        for key, value in self.attrs:
            if key == name:
                return value
        return None

    def get_raw(self, name: str, default: Optional[str] = None) -> Optional[str]:
        value = self.get(name)
        return value.raw if value is not None else default

    def has(self, name: str) -> bool:
        return any(key == name for key, _ in self.attrs)

    def set(self, name: str, value: AttrValue) -> None:
        for i, (key, _) in enumerate(self.attrs):
            if key == name:
                self.attrs[i] = (name, value)
                return
        self.attrs.append((name, value))

    def set_raw(self, name: str, raw: str) -> None:
        self.set(name, AttrValue.of(name, raw))

    def remove_attr(self, name: str) -> bool:
        for i, (key, _) in enumerate(self.attrs):
            if key == name:
                del self.attrs[i]
                return True
        return False

    def clone(self) -> "SvgElement":
        return SvgElement(
            tag=self.tag,
            attrs=list(self.attrs),
            children=[c.clone() for c in self.children],
            text=self.text,
        )

    def iter(self) -> Iterator["SvgElement"]:
        """Depth-first traversal including self."""
        yield self
        for child in self.children:
            yield from child.iter()

    def structure_equal(self, other: "SvgElement") -> bool:
        """Tag/attr-raw/text/children equality, ignoring parsed forms."""
        if self.tag != other.tag or self.text != other.text:
            return False
        if [(k, v.raw) for k, v in self.attrs] != [
            (k, v.raw) for k, v in other.attrs
        ]:
            return False
        if len(self.children) != len(other.children):
            return False
        return all(
            a.structure_equal(b) for a, b in zip(self.children, other.children)
        )


@dataclass
class SvgDocument:
    """Parsed SVG document: the ``svg`` root plus source size bookkeeping."""

    root: SvgElement
    source_bytes_len: int = 0

    def clone(self) -> "SvgDocument":
        return SvgDocument(self.root.clone(), self.source_bytes_len)

    def iter(self) -> Iterator[SvgElement]:
        return self.root.iter()

    def structure_equal(self, other: "SvgDocument") -> bool:
        return self.root.structure_equal(other.root)
