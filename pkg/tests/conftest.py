import pytest

from svgbench.corpus import generate_canonical_corpus, generate_corpus
from svgbench.tokenizer import SvgTokenizer, build_vocab, synthetic_base


@pytest.fixture(scope="session")
def raw_corpus():
    """Verbose editor-flavored icons."""
    return generate_corpus(30, seed=1234)


@pytest.fixture(scope="session")
def canonical_corpus():
    """Icons run through the full canonicalization pipeline."""
    return generate_canonical_corpus(30, seed=99)


@pytest.fixture(scope="session")
def base_tokenizer():
    return synthetic_base(dim=32, seed=0)


@pytest.fixture(scope="session")
def svg_tokenizer(base_tokenizer):
    return SvgTokenizer(base_tokenizer, build_vocab())
