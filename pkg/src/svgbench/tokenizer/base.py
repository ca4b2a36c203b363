"""Injected view of a base (pretrained) tokenizer.

The artifact never depends on a specific model: a base tokenizer is three
things loaded from files - a string->id vocabulary, a text encoder, and an
embedding row per id.  Encoding uses greedy longest-match over the
vocabulary (deterministic and adequate for the corpora here); projects with
a real BPE can inject their own encode function instead.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np


class EmptyDecomposition(ValueError):
    """Base tokenizer produced no ids for a non-empty string."""


@dataclass
class BaseTokenizerView:
    vocab: dict[str, int]
    embedding: Optional[np.ndarray] = None  # (vocab, dim) float32
    encode_fn: Optional[Callable[[str], list[int]]] = None
    _by_id: dict[int, str] = field(default_factory=dict, repr=False)
    _by_length: list[str] = field(default_factory=list, repr=False)

    def __post_init__(self):
        self._by_id = {i: s for s, i in self.vocab.items()}
        if self.embedding is not None and len(self.embedding) < len(self.vocab):
            raise ValueError("embedding matrix smaller than vocabulary")
        # bucket tokens by first char for the greedy matcher
        buckets: dict[str, list[str]] = {}
        for token in self.vocab:
            if token:
                buckets.setdefault(token[0], []).append(token)
        for bucket in buckets.values():
            bucket.sort(key=len, reverse=True)
        self._buckets = buckets

    @property
    def vocab_size(self) -> int:
        return len(self.vocab)

    @property
    def dim(self) -> int:
        if self.embedding is None:
            raise ValueError("no embedding matrix loaded")
        return self.embedding.shape[1]

    def encode_text(self, text: str) -> list[int]:
        if self.encode_fn is not None:
            ids = self.encode_fn(text)
        else:
            ids = self._greedy_encode(text)
        if text and not ids:
            raise EmptyDecomposition(f"no ids for {text!r}")
        return ids

    def _greedy_encode(self, text: str) -> list[int]:
        ids: list[int] = []
        pos = 0
        n = len(text)
        while pos < n:
            bucket = self._buckets.get(text[pos])
            match = None
            if bucket:
                for token in bucket:
                    if text.startswith(token, pos):
                        match = token
                        break
            if match is None:
                raise EmptyDecomposition(
                    f"character {text[pos]!r} not covered by base vocabulary"
                )
            ids.append(self.vocab[match])
            pos += len(match)
        return ids

    def decode_ids(self, ids: list[int]) -> str:
        try:
            return "".join(self._by_id[i] for i in ids)
        except KeyError as exc:
            raise KeyError(f"unknown base token id {exc.args[0]}") from exc

    def embedding_of(self, token_id: int) -> np.ndarray:
        if self.embedding is None:
            raise ValueError("no embedding matrix loaded")
        return self.embedding[token_id]

    # -- file I/O ---------------------------------------------------------

    @staticmethod
    def from_files(vocab_path, embedding_path=None) -> "BaseTokenizerView":
        """vocab: JSON {token: id}; embedding: little-endian float32,
        row-major, one row per id."""
        with open(vocab_path, "r", encoding="utf-8") as fh:
            vocab = json.load(fh)
        if not isinstance(vocab, dict):
            raise ValueError("vocabulary JSON must map token -> id")
        embedding = None
        if embedding_path is not None:
            raw = np.fromfile(embedding_path, dtype="<f4")
            if len(vocab) == 0 or raw.size % len(vocab) != 0:
                raise ValueError(
                    "embedding size is not a multiple of the vocabulary size"
                )
            embedding = raw.reshape(len(vocab), -1)
        return BaseTokenizerView(vocab=vocab, embedding=embedding)

    def save(self, vocab_path, embedding_path=None) -> None:
        with open(vocab_path, "w", encoding="utf-8") as fh:
            json.dump(self.vocab, fh, ensure_ascii=False, indent=0, sort_keys=True)
        if embedding_path is not None and self.embedding is not None:
            self.embedding.astype("<f4").tofile(embedding_path)


# common SVG substrings baked into the synthetic vocabulary so it behaves
# like a subword model rather than a pure character map; none of them
# contain digits, quotes or '<' so special-token boundaries stay cheap
_SYNTHETIC_MERGES = (
    "path", "rect", "circle", "ellipse", "line", "polygon", "points",
    "svg", "view", "Box", "fill", "stroke", "width", "height", "trans",
    "form", "late", "rotate", "scale", "matrix", "animate", "Motion",
    "Transform", "gradient", "Gradient", "linear", "radial", "stop",
    "color", "opacity", "clip", "mask", "filter", "offset", "class",
    "the", "ing", "ion", "er", "an", "re", "on", "at", "en", "nd",
)


def synthetic_base(dim: int = 32, seed: int = 0) -> BaseTokenizerView:
    """Deterministic stand-in for a real pretrained tokenizer: printable
    ASCII characters plus a few merges, with seeded Gaussian embeddings."""
    tokens: list[str] = [chr(c) for c in range(32, 127)]
    tokens.extend(["\n", "\t"])
    tokens.extend(_SYNTHETIC_MERGES)
    vocab = {tok: i for i, tok in enumerate(tokens)}
    rng = np.random.default_rng(seed)
    embedding = rng.standard_normal((len(vocab), dim)).astype(np.float32)
    return BaseTokenizerView(vocab=vocab, embedding=embedding)
