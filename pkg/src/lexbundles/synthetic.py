"""Synthetic Zipf corpora for benchmarks and scale tests."""

from __future__ import annotations

import numpy as np

from .corpus import Corpus, Document, make_token

__all__ = ["zipf_corpus"]


def zipf_corpus(
    total_tokens: int,
    vocab_size: int = 50_000,
    n_docs: int = 100,
    exponent: float = 1.1,
    seed: int = 0,
) -> Corpus:
    """A corpus of Zipf-distributed word tokens split into equal documents."""
    rng = np.random.default_rng(seed)
    ranks = np.arange(1, vocab_size + 1, dtype=np.float64)
    probs = ranks**-exponent
    probs /= probs.sum()
    ids = rng.choice(vocab_size, size=total_tokens, p=probs)
    vocab = [f"w{i}" for i in range(vocab_size)]
    token_objs = [make_token(w) for w in vocab]
    per_doc = total_tokens // n_docs
    docs = []
    for d in range(n_docs):
        lo = d * per_doc
        hi = total_tokens if d == n_docs - 1 else lo + per_doc
        tokens = tuple(token_objs[i] for i in ids[lo:hi])
        docs.append(Document(id=f"doc{d:04d}", tokens=tokens))
    return Corpus(tuple(docs))
