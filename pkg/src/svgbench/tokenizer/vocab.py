"""The SVG special-token inventory.

464 tokens total: 55 tag tokens, 42 attribute tokens (each ending in a
double quote so the value context is unambiguous), 257 integer tokens
covering -128..128, and 110 fractional tokens (.0-.9 plus .00-.99).
The inventory ships as a JSON manifest checked into the package; the
builder and the manifest are asserted against each other in the tests.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Optional

TAG_TOKENS: dict[str, tuple[str, ...]] = {
    "root": ("<svg", "</svg>", "<defs", "</defs>", "<use", "</use>", "/>"),
    "grouping": ("<g", "</g>"),
    "shapes": (
        "<path", "</path>", "<rect", "</rect>", "<circle", "</circle>",
        "<ellipse", "</ellipse>", "<line", "</line>", "<polyline",
        "</polyline>", "<polygon", "</polygon>",
    ),
    "text": ("<text", "</text>", "<tspan", "</tspan>", "<textPath", "</textPath>"),
    "gradients": (
        "<linearGradient", "</linearGradient>", "<radialGradient",
        "</radialGradient>", "<stop", "</stop>",
    ),
    "clipping": ("<clipPath", "</clipPath>", "<mask", "</mask>"),
    "filters": (
        "<filter", "</filter>", "<feGaussianBlur", "</feGaussianBlur>",
        "<feColorMatrix", "</feColorMatrix>", "<feComposite", "</feComposite>",
        "<feBlend", "</feBlend>",
    ),
    "animation": (
        "<animate", "</animate>", "<animateMotion", "</animateMotion>",
        "<animateTransform", "</animateTransform>",
    ),
}

ATTR_TOKENS: dict[str, tuple[str, ...]] = {
    "geometry": (
        'width="', 'height="', 'viewBox="', 'x="', 'y="', 'x1="', 'y1="',
        'x2="', 'y2="', 'cx="', 'cy="', 'r="', 'rx="', 'ry="', 'd="',
        'points="',
    ),
    "styling": (
        'fill="', 'stroke="', 'stroke-width="', 'stroke-linecap="',
        'stroke-linejoin="', 'stroke-miterlimit="', 'fill-rule="',
        'opacity="',
    ),
    "transform": ('transform="',),
    "text": ('font-size="', 'font-family="', 'text-anchor="'),
    "gradients": (
        'gradientUnits="', 'gradientTransform="', 'offset="', 'stop-color="',
    ),
    "animation": (
        'begin="', 'dur="', 'repeatCount="', 'from="', 'to="', 'rotate="',
        'path="',
    ),
    "identifiers": ('id="', 'class="', 'clip-path="'),
}

INT_RANGE = (-128, 128)


def _int_tokens() -> tuple[str, ...]:
    return tuple(str(v) for v in range(INT_RANGE[0], INT_RANGE[1] + 1))


def _frac_tokens() -> tuple[str, ...]:
    one = tuple(f".{d}" for d in range(10))
    two = tuple(f".{d:02d}" for d in range(100))
    return one + two


@dataclass(frozen=True)
class SpecialVocab:
    tag_tokens: tuple[str, ...]
    attr_tokens: tuple[str, ...]
    int_tokens: tuple[str, ...]
    frac_tokens: tuple[str, ...]
    id_offset: Optional[int] = None
    categories: dict = field(default_factory=dict, compare=False)

    @property
    def all_tokens(self) -> tuple[str, ...]:
        """Manifest order: tags, attributes, integers, fractions."""
        return self.tag_tokens + self.attr_tokens + self.int_tokens + self.frac_tokens

    def __len__(self) -> int:
        return len(self.all_tokens)

    def index_of(self, token: str) -> int:
        return self.all_tokens.index(token)

    def bound(self, id_offset: int) -> "SpecialVocab":
        return SpecialVocab(
            self.tag_tokens,
            self.attr_tokens,
            self.int_tokens,
            self.frac_tokens,
            id_offset,
            self.categories,
        )

    def int_token_set(self) -> frozenset[str]:
        return frozenset(self.int_tokens)

    def frac_token_set(self) -> frozenset[str]:
        return frozenset(self.frac_tokens)


def build_vocab() -> SpecialVocab:
    tags = tuple(t for group in TAG_TOKENS.values() for t in group)
    attrs = tuple(t for group in ATTR_TOKENS.values() for t in group)
    categories = {
        "tags": {k: list(v) for k, v in TAG_TOKENS.items()},
        "attributes": {k: list(v) for k, v in ATTR_TOKENS.items()},
    }
    vocab = SpecialVocab(
        tag_tokens=tags,
        attr_tokens=attrs,
        int_tokens=_int_tokens(),
        frac_tokens=_frac_tokens(),
        categories=categories,
    )
    assert len(vocab.tag_tokens) == 55, len(vocab.tag_tokens)
    assert len(vocab.attr_tokens) == 42, len(vocab.attr_tokens)
    assert len(vocab.int_tokens) == 257
    assert len(vocab.frac_tokens) == 110
    return vocab


def manifest_dict(vocab: SpecialVocab) -> dict:
    tokens = []
    categories = []
    for cat, group in TAG_TOKENS.items():
        categories.extend([("tag", cat)] * len(group))
    for cat, group in ATTR_TOKENS.items():
        categories.extend([("attr", cat)] * len(group))
    categories.extend([("int", "integer")] * len(vocab.int_tokens))
    categories.extend([("frac", "fraction")] * len(vocab.frac_tokens))
    for i, (text, (kind, cat)) in enumerate(zip(vocab.all_tokens, categories)):
        tokens.append({"id": i, "text": text, "kind": kind, "category": cat})
    return {
        "version": 1,
        "counts": {
            "tags": len(vocab.tag_tokens),
            "attributes": len(vocab.attr_tokens),
            "integers": len(vocab.int_tokens),
            "fractions": len(vocab.frac_tokens),
            "total": len(vocab),
        },
        "tokens": tokens,
    }


def write_manifest(vocab: SpecialVocab, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest_dict(vocab), fh, indent=1, ensure_ascii=False)
        fh.write("\n")


def load_manifest() -> dict:
    data = resources.files("svgbench.tokenizer").joinpath("vocab_manifest.json")
    return json.loads(data.read_text(encoding="utf-8"))
