"""SVG toolkit: canonicalization, tokenization, edit synthesis, rendering and benchmark scoring."""

from .core import parse_svg, serialize_svg
from .metrics import (
    rasterize,
    rasterize_animation,
    rasterize_text,
    validate_renderable,
)
from .normalize import NormalizeConfig, normalize_viewbox, pipeline, quantize_numbers, simplify

__version__ = "0.1.0"

__all__ = [
    "NormalizeConfig",
    "normalize_viewbox",
    "parse_svg",
    "pipeline",
    "quantize_numbers",
    "rasterize",
    "rasterize_animation",
    "rasterize_text",
    "serialize_svg",
    "simplify",
    "validate_renderable",
    "__version__",
]
