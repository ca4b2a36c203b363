"""Encoding between SVG text and mixed special/base token sequences.

Greedy longest-match: at every position the longest matching special token
wins; numeric literals emit as [integer token][fraction token] but only in
value position (preceded by start of text, space, comma, a double quote, or
a path command letter) so digits inside identifiers stay with the base
tokenizer.  Everything else falls through to the injected base tokenizer.

decode(encode(s)) == s holds byte-for-byte for arbitrary text.  Token
counts never exceed base-only counts provided base merges do not span the
special-token boundaries (true for any merge table free of digits, quotes
and angle brackets, including the synthetic base shipped for tests).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .base import BaseTokenizerView
from .vocab import SpecialVocab

_COMMAND_LETTERS = set("MmLlHhVvCcSsQqTtAaZz")
_ALLOWED_BEFORE = set(' ,"') | _COMMAND_LETTERS

_NUMERIC_RE = r"-?(?:\d+(?:\.\d+)?|\.\d+)"


class UnknownId(KeyError):
    pass


class EmptyCorpus(ValueError):
    pass


@dataclass(frozen=True)
class TokenSeq:
    ids: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.ids)


def _master_pattern(vocab: SpecialVocab) -> re.Pattern:
    literals = sorted(
        vocab.tag_tokens + vocab.attr_tokens, key=len, reverse=True
    )
    alternation = "|".join(re.escape(t) for t in literals)
    return re.compile(f"(?P<special>{alternation})|(?P<number>{_NUMERIC_RE})")


@dataclass
class SvgTokenizer:
    """Binds a special vocabulary to a base tokenizer view."""

    base: BaseTokenizerView
    vocab: SpecialVocab
    _pattern: re.Pattern = field(init=False, repr=False)
    _special_ids: dict[str, int] = field(init=False, repr=False)
    _int_set: frozenset = field(init=False, repr=False)
    _frac_set: frozenset = field(init=False, repr=False)

    def __post_init__(self):
        offset = (
            self.vocab.id_offset
            if self.vocab.id_offset is not None
            else self.base.vocab_size
        )
        if offset < self.base.vocab_size:
            raise ValueError("special ids would collide with base ids")
        self.vocab = self.vocab.bound(offset)
        self._pattern = _master_pattern(self.vocab)
        self._special_ids = {
            tok: offset + i for i, tok in enumerate(self.vocab.all_tokens)
        }
        self._int_set = self.vocab.int_token_set()
        self._frac_set = self.vocab.frac_token_set()

    @property
    def id_offset(self) -> int:
        return self.vocab.id_offset  # type: ignore[return-value]

    @property
    def total_vocab_size(self) -> int:
        return self.id_offset + len(self.vocab)

    # -- encode -----------------------------------------------------------

    def encode(self, text: str) -> TokenSeq:
        ids: list[int] = []
        gap_start = 0

        def flush(end: int) -> None:
            if end > gap_start:
                ids.extend(self.base.encode_text(text[gap_start:end]))

        for m in self._pattern.finditer(text):
            if m.group("special") is not None:
                flush(m.start())
                ids.append(self._special_ids[m.group("special")])
                gap_start = m.end()
                continue
            literal = m.group("number")
            before = text[m.start() - 1] if m.start() > 0 else None
            if before is not None and before not in _ALLOWED_BEFORE:
                continue  # stays inside the running base gap
            flush(m.start())
            ids.extend(self._encode_numeric(literal))
            gap_start = m.end()
        flush(len(text))
        return TokenSeq(tuple(ids))

    def _encode_numeric(self, literal: str) -> list[int]:
        if "." in literal:
            int_part, frac_part = literal.split(".", 1)
            frac_text = "." + frac_part
        else:
            int_part, frac_text = literal, None
        out: list[int] = []
        if int_part:
            special = self._special_ids.get(int_part)
            if special is not None and int_part in self._int_set:
                out.append(special)
            else:
                out.extend(self.base.encode_text(int_part))
        if frac_text is not None:
            special = self._special_ids.get(frac_text)
            if special is not None and frac_text in self._frac_set:
                out.append(special)
            else:
                out.extend(self.base.encode_text(frac_text))
        return out

    # -- decode -----------------------------------------------------------

    def decode(self, seq: TokenSeq) -> str:
        offset = self.id_offset
        tokens = self.vocab.all_tokens
        parts: list[str] = []
        base_run: list[int] = []

        def flush_base() -> None:
            if base_run:
                parts.append(self.base.decode_ids(base_run))
                base_run.clear()

        for token_id in seq.ids:
            if token_id < 0 or token_id >= offset + len(tokens):
                raise UnknownId(token_id)
            if token_id >= offset:
                flush_base()
                parts.append(tokens[token_id - offset])
            else:
                base_run.append(token_id)
        flush_base()
        return "".join(parts)

    def count(self, text: str) -> int:
        return len(self.encode(text))

    def count_base_only(self, text: str) -> int:
        return len(self.base.encode_text(text))


@dataclass
class CompressionStats:
    mean_before: float
    mean_after: float
    ratio_histogram: dict[str, int]
    per_file: list[tuple[int, int]]

    @property
    def ratio(self) -> float:
        return self.mean_after / self.mean_before if self.mean_before else 1.0


_HIST_BINS = [
    (0.0, 0.1), (0.1, 0.2), (0.2, 0.3), (0.3, 0.4), (0.4, 0.5),
    (0.5, 0.6), (0.6, 0.7), (0.7, 0.8), (0.8, 0.9), (0.9, 1.0),
]


def compression_stats(
    corpus: list[str], tokenizer: SvgTokenizer
) -> CompressionStats:
    """Per-file token counts under base-only vs special-augmented encoding."""
    if not corpus:
        raise EmptyCorpus("no files to measure")
    per_file: list[tuple[int, int]] = []
    hist = {f"{lo:.1f}-{hi:.1f}": 0 for lo, hi in _HIST_BINS}
    hist[">=1.0"] = 0
    for text in corpus:
        before = tokenizer.count_base_only(text)
        after = tokenizer.count(text)
        per_file.append((before, after))
        ratio = after / before if before else 1.0
        for lo, hi in _HIST_BINS:
            if lo <= ratio < hi:
                hist[f"{lo:.1f}-{hi:.1f}"] += 1
                break
        else:
            hist[">=1.0"] += 1
    mean_before = sum(b for b, _ in per_file) / len(per_file)
    mean_after = sum(a for _, a in per_file) / len(per_file)
    return CompressionStats(mean_before, mean_after, hist, per_file)
