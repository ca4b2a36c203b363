"""SVG text -> SvgDocument.

Built on expat with namespace processing off, so prefixed names
(xlink:href, inkscape:label) survive verbatim.  Attribute order is kept,
comments become #comment nodes, inter-element whitespace is dropped, and
entity references beyond the XML built-ins are rejected.
"""

from __future__ import annotations

import xml.parsers.expat as expat

from .model import AttrValue, COMMENT_TAG, SvgDocument, SvgElement


class MalformedXml(ValueError):
    """Input is not well-formed XML (or uses unsupported entities)."""


class NotSvg(ValueError):
    """Well-formed XML whose root element is not ``svg``."""


# style properties expanded into presentation attributes at parse time;
# edit transforms address fill/stroke/opacity directly
_STYLE_EXPAND = ("fill", "stroke", "opacity", "fill-opacity", "stroke-opacity")

_TEXTUAL_TAGS = {"text", "tspan", "textPath", "title", "desc", "style"}


def _expand_style(attrs: list[tuple[str, str]]) -> list[tuple[str, str]]:
    out: list[tuple[str, str]] = []
    existing = {k for k, _ in attrs}
    for key, value in attrs:
        if key != "style":
            out.append((key, value))
            continue
        kept: list[str] = []
        expanded: list[tuple[str, str]] = []
        for decl in value.split(";"):
            decl = decl.strip()
            if not decl or ":" not in decl:
                continue
            prop, _, pv = decl.partition(":")
            prop, pv = prop.strip(), pv.strip()
            if prop in _STYLE_EXPAND:
                expanded.append((prop, pv))
            else:
                kept.append(f"{prop}:{pv}")
        # style declarations override presentation attributes,
        # so replace rather than duplicate
        for prop, pv in expanded:
            if prop in existing:
                out = [(k, v) if k != prop else (k, pv) for k, v in out]
            else:
                out.append((prop, pv))
                existing.add(prop)
        if kept:
            out.append(("style", ";".join(kept)))
    return out


class _TreeBuilder:
    def __init__(self, expand_style: bool):
        self.stack: list[SvgElement] = []
        self.root: SvgElement | None = None
        self.expand_style = expand_style
        self._pending_root_comments: list[SvgElement] = []

    def start(self, tag: str, attr_list: list[str]) -> None:
        pairs = [(attr_list[i], attr_list[i + 1]) for i in range(0, len(attr_list), 2)]
        if self.expand_style and any(k == "style" for k, _ in pairs):
            pairs = _expand_style(pairs)
        seen: set[str] = set()
        attrs: list[tuple[str, AttrValue]] = []
        for key, value in pairs:
            if key in seen:
                raise MalformedXml(f"duplicate attribute {key!r} on <{tag}>")
            seen.add(key)
            attrs.append((key, AttrValue.of(key, value)))
        element = SvgElement(tag=tag, attrs=attrs)
        if self.stack:
            self.stack[-1].children.append(element)
        elif self.root is None:
            element.children.extend(self._pending_root_comments)
            self._pending_root_comments.clear()
            self.root = element
        self.stack.append(element)

    def end(self, tag: str) -> None:
        self.stack.pop()

    def chardata(self, data: str) -> None:
        if not self.stack:
            return
        top = self.stack[-1]
        local = top.tag.rsplit(":", 1)[-1]
        if local in _TEXTUAL_TAGS or top.is_foreign:
            top.text = (top.text or "") + data
        elif data.strip():
            top.text = (top.text or "") + data.strip()

    def comment(self, data: str) -> None:
        node = SvgElement(tag=COMMENT_TAG, text=data)
        if self.stack:
            self.stack[-1].children.append(node)
        elif self.root is None:
            # prolog comments are attached under the root once it appears
            self._pending_root_comments.append(node)


def parse_svg(text: str, *, expand_style: bool = True) -> SvgDocument:
    """Parse SVG source into a document tree.

    Raises MalformedXml for non-XML input and NotSvg when the root element
    is not ``svg``.
    """
    if not isinstance(text, str):
        raise TypeError("parse_svg expects str input")
    builder = _TreeBuilder(expand_style)
    parser = expat.ParserCreate(namespace_separator=None)
    parser.ordered_attributes = True
    parser.StartElementHandler = builder.start
    parser.EndElementHandler = builder.end
    parser.CharacterDataHandler = builder.chardata
    parser.CommentHandler = builder.comment

    def _reject_entity(*_args, **_kwargs):  # pragma: no cover - expat detail
        raise MalformedXml("custom entity declarations are not supported")

    parser.EntityDeclHandler = _reject_entity
    parser.ExternalEntityRefHandler = lambda *a: 0

    try:
        parser.Parse(text, True)
    except MalformedXml:
        raise
    except expat.ExpatError as exc:
        raise MalformedXml(str(exc)) from exc

    root = builder.root
    if root is None:
        raise MalformedXml("no root element")
    if root.tag != "svg":
        raise NotSvg(f"root element is <{root.tag}>, expected <svg>")
    return SvgDocument(root=root, source_bytes_len=len(text.encode("utf-8")))
