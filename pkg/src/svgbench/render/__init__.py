"""Rasterization: coverage core, scene walker, PNG I/O, animation sampling."""

from .png import decode_png, encode_png, read_png, write_png
from .scene import RenderError, render_document, validate_document

__all__ = [
    "RenderError",
    "decode_png",
    "encode_png",
    "read_png",
    "render_document",
    "validate_document",
    "write_png",
]
