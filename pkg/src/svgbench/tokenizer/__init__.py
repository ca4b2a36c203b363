"""SVG-specific token vocabulary, codec and embedding initialization."""

from .base import BaseTokenizerView, EmptyDecomposition, synthetic_base
from .codec import (
    CompressionStats,
    EmptyCorpus,
    SvgTokenizer,
    TokenSeq,
    UnknownId,
    compression_stats,
)
from .embed import EmbeddingInit, init_embeddings, read_embeddings, write_embeddings
from .vocab import SpecialVocab, build_vocab, load_manifest, manifest_dict, write_manifest

__all__ = [
    "BaseTokenizerView",
    "CompressionStats",
    "EmbeddingInit",
    "EmptyCorpus",
    "EmptyDecomposition",
    "SpecialVocab",
    "SvgTokenizer",
    "TokenSeq",
    "UnknownId",
    "build_vocab",
    "compression_stats",
    "init_embeddings",
    "load_manifest",
    "manifest_dict",
    "read_embeddings",
    "synthetic_base",
    "write_embeddings",
    "write_manifest",
]
