#!/usr/bin/env python3
"""Benchmark n-gram counting on synthetic Zipf-distributed corpora.

Reports wall time, peak resident memory, and the scaling ratio between a
half-size and full-size corpus (a healthy counter should stay well under
2.5x when the corpus doubles).

Usage:
    python3 scripts/benchmark_counting.py [--tokens 8000000] [--vocab 50000]
"""

import argparse
import resource
import time

from lexbundles.counting import count_ngrams
from lexbundles.synthetic import zipf_corpus


def peak_rss_mb() -> float:
    return resource.getrusage(resource.RUSAGE_SELF).ru_maxrss / 1024


def bench(tokens: int, vocab: int, n_docs: int, seed: int) -> float:
    corpus = zipf_corpus(tokens, vocab_size=vocab, n_docs=n_docs, seed=seed)
    t0 = time.perf_counter()
    table = count_ngrams(corpus, 1, 5)
    elapsed = time.perf_counter() - t0
    print(
        f"tokens={tokens:>10,}  docs={n_docs:>4}  distinct={len(table):>12,}"
        f"  time={elapsed:7.2f}s  peak_rss={peak_rss_mb():8.1f}MB"
    )
    return elapsed


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--tokens", type=int, default=8_000_000)
    parser.add_argument("--vocab", type=int, default=50_000)
    parser.add_argument("--docs", type=int, default=200)
    parser.add_argument("--seed", type=int, default=42)
    args = parser.parse_args()

    t_half = bench(args.tokens // 2, args.vocab, args.docs // 2, args.seed)
    t_full = bench(args.tokens, args.vocab, args.docs, args.seed)
    print(f"doubling ratio: {t_full / t_half:.2f}x")


if __name__ == "__main__":
    main()
