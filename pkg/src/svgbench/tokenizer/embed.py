"""Subword-averaged embedding initialization for the special tokens.

Each new token's vector is the componentwise arithmetic mean of the base
embeddings of its subword decomposition.  Vectors are computed in float64
and written out as little-endian float32 rows in manifest order, next to a
JSON index mapping token text to row and subword ids.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .base import BaseTokenizerView, EmptyDecomposition
from .vocab import SpecialVocab


@dataclass(frozen=True)
class EmbeddingInit:
    token: str
    subword_ids: tuple[int, ...]
    vector: np.ndarray  # float64, shape (dim,)


def init_embeddings(
    vocab: SpecialVocab, base: BaseTokenizerView
) -> list[EmbeddingInit]:
    if base.embedding is None:
        raise ValueError("base tokenizer has no embedding matrix")
    out: list[EmbeddingInit] = []
    for token in vocab.all_tokens:
        ids = base.encode_text(token)
        if not ids:
            raise EmptyDecomposition(f"base tokenizer dropped {token!r}")
        rows = base.embedding[np.array(ids, dtype=np.int64)].astype(np.float64)
        out.append(EmbeddingInit(token, tuple(ids), rows.mean(axis=0)))
    return out


def write_embeddings(inits: list[EmbeddingInit], matrix_path, index_path) -> None:
    matrix = np.stack([e.vector for e in inits]).astype("<f4")
    matrix.tofile(matrix_path)
    index = {
        "rows": len(inits),
        "dim": int(matrix.shape[1]),
        "dtype": "float32-le",
        "tokens": [
            {"row": i, "text": e.token, "subword_ids": list(e.subword_ids)}
            for i, e in enumerate(inits)
        ],
    }
    with open(index_path, "w", encoding="utf-8") as fh:
        json.dump(index, fh, ensure_ascii=False, indent=1)
        fh.write("\n")


def read_embeddings(matrix_path, index_path):
    with open(index_path, "r", encoding="utf-8") as fh:
        index = json.load(fh)
    matrix = np.fromfile(matrix_path, dtype="<f4").reshape(
        index["rows"], index["dim"]
    )
    return matrix, index
