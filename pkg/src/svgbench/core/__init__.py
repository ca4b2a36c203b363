"""SVG document model, parser and serializer."""

from .colors import Color, NAMED_COLORS
from .model import (
    AttrValue,
    COMMENT_TAG,
    KNOWN_TAGS,
    NumberList,
    Opaque,
    SHAPE_TAGS,
    SvgDocument,
    SvgElement,
)
from .parser import MalformedXml, NotSvg, parse_svg
from .pathdata import ARITY, PathCommand, PathData
from .serializer import format_number, round_half_away, serialize_svg
from .transforms import TransformEntry, TransformList, TransformMatrix

__all__ = [
    "ARITY",
    "AttrValue",
    "COMMENT_TAG",
    "Color",
    "KNOWN_TAGS",
    "MalformedXml",
    "NAMED_COLORS",
    "NotSvg",
    "NumberList",
    "Opaque",
    "PathCommand",
    "PathData",
    "SHAPE_TAGS",
    "SvgDocument",
    "SvgElement",
    "TransformEntry",
    "TransformList",
    "TransformMatrix",
    "format_number",
    "parse_svg",
    "round_half_away",
    "serialize_svg",
]
