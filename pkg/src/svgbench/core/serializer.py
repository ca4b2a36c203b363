"""SvgDocument -> SVG text.

Numbers print with at most ``precision`` decimals (half-away-from-zero),
trailing zeros stripped; attributes keep parse order; elements without
children or text self-close.
"""

from __future__ import annotations

from decimal import ROUND_HALF_UP, Decimal

from .model import COMMENT_TAG, SvgDocument, SvgElement


def round_half_away(value: float, precision: int = 2) -> float:
    """Round half away from zero, e.g. -0.005 -> -0.01 at 2 decimals."""
    q = Decimal(1).scaleb(-precision)
    return float(Decimal(repr(value)).quantize(q, rounding=ROUND_HALF_UP))


def format_number(value: float, precision: int = 2) -> str:
    """Shortest decimal form: 12.50 -> '12.5', 12.00 -> '12', -0.0 -> '0'."""
    rounded = round_half_away(float(value), precision)
    text = f"{rounded:.{precision}f}"
    if "." in text:
        text = text.rstrip("0").rstrip(".")
    if text in ("-0", ""):
        text = "0"
    return text


def _escape_attr(value: str) -> str:
    return (
        value.replace("&", "&amp;")
        .replace("<", "&lt;")
        .replace(">", "&gt;")
        .replace('"', "&quot;")
    )


def _escape_text(value: str) -> str:
    return value.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def _serialize_element(el: SvgElement, out: list[str], precision: int) -> None:
    if el.tag == COMMENT_TAG:
        out.append(f"<!--{el.text or ''}-->")
        return
    out.append(f"<{el.tag}")
    for name, value in el.attrs:
        out.append(f' {name}="{_escape_attr(value.with_raw_of_parsed(precision))}"')
    if not el.children and el.text is None:
        out.append("/>")
        return
    out.append(">")
    if el.text is not None:
        out.append(_escape_text(el.text))
    for child in el.children:
        _serialize_element(child, out, precision)
    out.append(f"</{el.tag}>")


def serialize_svg(doc: SvgDocument, *, precision: int = 2) -> str:
    out: list[str] = []
    _serialize_element(doc.root, out, precision)
    return "".join(out)
