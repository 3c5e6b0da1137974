"""Single-pass n-gram counting with per-document range tracking."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, TextIO

import numpy as np

from .corpus import Corpus, Document

__all__ = [
    "NgramKey",
    "BundleStats",
    "BundleTable",
    "ConfigError",
    "UndefinedStatisticError",
    "count_ngrams",
    "count_document",
    "merge_counts",
    "size_distribution",
    "coverage_stat",
    "top_k",
    "write_table_tsv",
    "read_table_tsv",
]

NgramKey = tuple[str, ...]

MAX_NGRAM = 5


class ConfigError(Exception):
    """Raised for invalid counting or pipeline configuration."""


class UndefinedStatisticError(Exception):
    """Raised when a statistic has no defined value (e.g. empty corpus)."""


@dataclass(frozen=True, slots=True)
class BundleStats:
    raw_freq: int
    doc_range: int
    freq_per_million: float


@dataclass
class _CompactLevel:
    """Keys of one n-gram length, rank-encoded against the previous level.

    Key ``i`` of length n is the key ``prefix[i]`` of length n-1 extended by
    the vocabulary id ``last[i]``; for n=1 there is no prefix. ``counts`` and
    ``ranges`` are only populated for lengths inside the requested range.
    """

    prefix: np.ndarray | None
    last: np.ndarray
    counts: np.ndarray | None
    ranges: np.ndarray | None


@dataclass
class _CompactCounts:
    """Array-backed exact n-gram counts, decoded to dicts only on demand."""

    vocab: list[str]
    levels: dict[int, _CompactLevel]
    n_min: int
    n_max: int

    def n_keys(self) -> int:
        return sum(
            len(self.levels[n].last)
            for n in range(self.n_min, self.n_max + 1)
            if n in self.levels
        )

    def materialize(self) -> tuple[dict[NgramKey, int], dict[NgramKey, int]]:
        counts: dict[NgramKey, int] = {}
        ranges: dict[NgramKey, int] = {}
        prev_keys: list[NgramKey] = []
        for n in range(1, self.n_max + 1):
            level = self.levels.get(n)
            if level is None:
                break
            if n == 1:
                keys = [(self.vocab[t],) for t in level.last.tolist()]
            else:
                keys = [
                    prev_keys[p] + (self.vocab[t],)
                    for p, t in zip(level.prefix.tolist(), level.last.tolist())
                ]
            if level.counts is not None:
                counts.update(zip(keys, level.counts.tolist()))
                ranges.update(zip(keys, level.ranges.tolist()))
            prev_keys = keys
        return counts, ranges


class BundleTable:
    """Counts and document ranges for every n-gram of the configured sizes.

    ``window_totals[n]`` is the number of n-length windows in the corpus,
    i.e. sum over documents of max(0, len - n + 1); it doubles as the
    normalizer for n-gram probabilities.

    Counts may be held either as plain dicts or in a compact array encoding;
    the dict views are decoded lazily so that size and export statistics on
    very large corpora do not pay for millions of tuple keys up front.
    """

    def __init__(
        self,
        counts: dict[NgramKey, int] | None = None,
        doc_ranges: dict[NgramKey, int] | None = None,
        corpus_total_tokens: int = 0,
        n_min: int = 1,
        n_max: int = MAX_NGRAM,
        window_totals: dict[int, int] | None = None,
        compact: _CompactCounts | None = None,
    ):
        if (counts is None) != (doc_ranges is None):
            raise ConfigError("counts and doc_ranges must be given together")
        if counts is None and compact is None:
            counts, doc_ranges = {}, {}
        self._counts = counts
        self._doc_ranges = doc_ranges
        self._compact = compact
        self.corpus_total_tokens = corpus_total_tokens
        self.n_min = n_min
        self.n_max = n_max
        self.window_totals = window_totals if window_totals is not None else {}

    def _materialize(self) -> None:
        if self._counts is None:
            self._counts, self._doc_ranges = self._compact.materialize()

    @property
    def counts(self) -> dict[NgramKey, int]:
        self._materialize()
        return self._counts

    @property
    def doc_ranges(self) -> dict[NgramKey, int]:
        self._materialize()
        return self._doc_ranges

    def __contains__(self, key: NgramKey) -> bool:
        return key in self.counts

    def __len__(self) -> int:
        if self._counts is None:
            return self._compact.n_keys()
        return len(self._counts)

    def keys(self) -> Iterable[NgramKey]:
        return self.counts.keys()

    def stats(self, key: NgramKey) -> BundleStats:
        raw = self.counts[key]
        if self.corpus_total_tokens == 0:
            raise UndefinedStatisticError("per-million frequency of empty corpus")
        return BundleStats(
            raw_freq=raw,
            doc_range=self.doc_ranges[key],
            freq_per_million=raw * 1_000_000 / self.corpus_total_tokens,
        )

    def sorted_keys(self) -> list[NgramKey]:
        """Export order: by (n, -raw_freq, ngram)."""
        return sorted(self.counts, key=lambda k: (len(k), -self.counts[k], k))


def _check_range(n_min: int, n_max: int) -> None:
    if not (1 <= n_min <= n_max <= MAX_NGRAM):
        raise ConfigError(
            f"n-gram range must satisfy 1 <= n_min <= n_max <= {MAX_NGRAM}, "
            f"got {n_min}..{n_max}"
        )


def count_document(doc: Document, n_min: int, n_max: int) -> Counter[NgramKey]:
    """Count all n-gram windows of one document (overlaps included)."""
    _check_range(n_min, n_max)
    surfaces = doc.surfaces
    counts: Counter[NgramKey] = Counter()
    for n in range(n_min, n_max + 1):
        if len(surfaces) >= n:
            counts.update(zip(*(surfaces[i:] for i in range(n))))
    return counts


def merge_counts(
    shard_counts: Iterable[Counter[NgramKey]],
) -> Counter[NgramKey]:
    """Associative, commutative merge of per-shard count maps."""
    total: Counter[NgramKey] = Counter()
    for c in shard_counts:
        total.update(c)
    return total


def _unique_inverse_counts(
    packed: np.ndarray,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Sorted distinct values with inverse indices and occurrence counts.

    Equivalent to ``np.unique(packed, return_inverse=True,
    return_counts=True)`` but built on a stable integer argsort, which numpy
    implements as a radix sort — linear in input size, so counting scales
    proportionally when a corpus doubles.
    """
    order = np.argsort(packed, kind="stable")
    sp = packed[order]
    newgrp = np.empty(len(sp), dtype=bool)
    if len(sp):
        newgrp[0] = True
        np.not_equal(sp[1:], sp[:-1], out=newgrp[1:])
    uniq = sp[newgrp]
    starts = np.flatnonzero(newgrp)
    counts = np.diff(np.append(starts, len(sp)))
    inverse = np.empty(len(sp), dtype=np.int64)
    inverse[order] = np.cumsum(newgrp) - 1
    return uniq, inverse, counts


def _compact_count(corpus: Corpus, n_min: int, n_max: int) -> _CompactCounts:
    """Exact array-based counting via successive rank encoding.

    Each n-gram window is packed as (rank of its (n-1)-gram prefix) * V +
    (vocabulary id of its last token), so one integer ``np.unique`` per
    length yields distinct keys, occurrence counts, and the window-to-key
    inverse needed for the next length and for document ranges.
    """
    vocab: dict[str, int] = {}
    doc_lens: list[int] = []
    id_chunks: list[np.ndarray] = []
    for doc in corpus.documents:
        surfaces = doc.surfaces
        doc_lens.append(len(surfaces))
        id_chunks.append(
            np.fromiter(
                (vocab.setdefault(s, len(vocab)) for s in surfaces),
                dtype=np.int32,
                count=len(surfaces),
            )
        )
    ids = (
        np.concatenate(id_chunks) if id_chunks else np.zeros(0, dtype=np.int32)
    )
    total = len(ids)
    n_docs = len(doc_lens)
    doc_of_token = np.repeat(np.arange(n_docs, dtype=np.int32), doc_lens)
    doc_ends = np.cumsum(np.asarray(doc_lens, dtype=np.int64))
    v_size = max(1, len(vocab))

    def shrink(a: np.ndarray) -> np.ndarray:
        if a.size == 0 or a.max() < 2**31:
            return a.astype(np.int32)
        return a

    levels: dict[int, _CompactLevel] = {}
    prev_inv = np.zeros(0, dtype=np.int64)
    for n in range(1, n_max + 1):
        starts = max(0, total - n + 1)
        # a window starting at s stays inside its document iff s + n <= end
        valid = (
            np.arange(starts, dtype=np.int64) + n
            <= doc_ends[doc_of_token[:starts]]
        )
        if n == 1:
            packed = ids[valid]
        else:
            packed = prev_inv[:starts][valid] * v_size + ids[n - 1 :][valid]
        uniq, inverse, counts = _unique_inverse_counts(packed)
        inv_full = np.empty(starts, dtype=np.int64)
        inv_full[valid] = inverse
        if n >= n_min:
            # valid windows are contiguous per document, so per-document
            # key sets fall out of segment-wise uniques (linear in corpus
            # size when growth means more documents, unlike a global sort)
            seg_ends = np.cumsum(
                [max(0, length - n + 1) for length in doc_lens]
            )
            per_doc_keys = [
                np.unique(inverse[lo:hi])
                for lo, hi in zip(np.concatenate(([0], seg_ends[:-1])), seg_ends)
            ] or [np.zeros(0, dtype=np.int64)]
            ranges = np.bincount(
                np.concatenate(per_doc_keys), minlength=len(uniq)
            )
            level_counts, level_ranges = shrink(counts), shrink(ranges)
        else:
            level_counts = level_ranges = None
        levels[n] = _CompactLevel(
            prefix=shrink(uniq // v_size) if n > 1 else None,
            last=shrink(uniq % v_size) if n > 1 else shrink(uniq),
            counts=level_counts,
            ranges=level_ranges,
        )
        prev_inv = inv_full
    return _CompactCounts(
        vocab=list(vocab), levels=levels, n_min=n_min, n_max=n_max
    )


def count_ngrams(corpus: Corpus, n_min: int = 1, n_max: int = MAX_NGRAM) -> BundleTable:
    """Count every contiguous window of each configured length.

    Deterministic regardless of how documents are sharded: counts merge by
    addition and document ranges by counting documents per key.
    """
    _check_range(n_min, n_max)
    window_totals = {
        n: sum(max(0, len(d) - n + 1) for d in corpus.documents)
        for n in range(n_min, n_max + 1)
    }
    return BundleTable(
        compact=_compact_count(corpus, n_min, n_max),
        corpus_total_tokens=corpus.total_tokens,
        n_min=n_min,
        n_max=n_max,
        window_totals=window_totals,
    )


def count_ngrams_sharded(
    corpus: Corpus, n_min: int = 1, n_max: int = MAX_NGRAM, shards: int = 1
) -> BundleTable:
    """Shard documents, count per shard, and merge.

    The merge is associative and commutative, so the result is identical to
    a single-shard count for any partition.
    """
    _check_range(n_min, n_max)
    if shards < 1:
        raise ConfigError(f"shard count must be positive, got {shards}")
    shard_totals: list[Counter[NgramKey]] = []
    shard_ranges: list[Counter[NgramKey]] = []
    for s in range(shards):
        counts: Counter[NgramKey] = Counter()
        ranges: Counter[NgramKey] = Counter()
        for doc in corpus.documents[s::shards]:
            doc_counts = count_document(doc, n_min, n_max)
            counts.update(doc_counts)
            ranges.update(doc_counts.keys())
        shard_totals.append(counts)
        shard_ranges.append(ranges)
    window_totals = {
        n: sum(max(0, len(d) - n + 1) for d in corpus.documents)
        for n in range(n_min, n_max + 1)
    }
    return BundleTable(
        counts=dict(merge_counts(shard_totals)),
        doc_ranges=dict(merge_counts(shard_ranges)),
        corpus_total_tokens=corpus.total_tokens,
        n_min=n_min,
        n_max=n_max,
        window_totals=window_totals,
    )


def size_distribution(
    table: BundleTable, selected: Iterable[NgramKey]
) -> dict[int, int]:
    """Distinct bundle types per token length over a selected key set."""
    dist: dict[int, int] = {}
    for key in set(selected):
        if key not in table.counts:
            raise KeyError(f"selected key not in table: {key}")
        dist[len(key)] = dist.get(len(key), 0) + 1
    return dict(sorted(dist.items()))


def coverage_stat(
    table: BundleTable, selected: Iterable[NgramKey], corpus: Corpus
) -> float:
    """Token-occurrence mass of the selected bundles over the corpus.

    Each occurrence of each selected bundle contributes its full token count,
    so heavy overlap can push the value past 1.0.
    """
    if corpus.total_tokens == 0:
        raise UndefinedStatisticError("coverage of an empty corpus")
    mass = 0
    for key in set(selected):
        if key not in table.counts:
            raise KeyError(f"selected key not in table: {key}")
        mass += table.counts[key] * len(key)
    return mass / corpus.total_tokens


def top_k(
    table: BundleTable, k: int, length_filter: int | None = None
) -> list[tuple[NgramKey, BundleStats]]:
    """Top-k keys by raw frequency; ties break lexicographically."""
    if k < 0:
        raise ConfigError(f"k must be non-negative, got {k}")
    keys = (
        key
        for key in table.counts
        if length_filter is None or len(key) == length_filter
    )
    ranked = sorted(keys, key=lambda key: (-table.counts[key], key))
    return [(key, table.stats(key)) for key in ranked[:k]]


TABLE_HEADER = "ngram\tn\traw_freq\tper_million\tdoc_range"


def write_table_tsv(table: BundleTable, out: TextIO) -> None:
    meta = "\t".join(
        [
            f"# corpus_total_tokens={table.corpus_total_tokens}",
            f"n_min={table.n_min}",
            f"n_max={table.n_max}",
        ]
    )
    out.write(meta + "\n")
    out.write(TABLE_HEADER + "\n")
    for key in table.sorted_keys():
        s = table.stats(key)
        out.write(
            f"{' '.join(key)}\t{len(key)}\t{s.raw_freq}"
            f"\t{s.freq_per_million:.6f}\t{s.doc_range}\n"
        )


def read_table_tsv(path: str | Path) -> BundleTable:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or not lines[0].startswith("# corpus_total_tokens="):
        raise ConfigError(f"{path}: not a bundle table export")
    meta = dict(
        part.lstrip("# ").split("=", 1) for part in lines[0].split("\t")
    )
    counts: dict[NgramKey, int] = {}
    doc_ranges: dict[NgramKey, int] = {}
    window_totals: dict[int, int] = {}
    for line in lines[2:]:
        if not line:
            continue
        ngram, n, raw, _pm, rng = line.split("\t")
        key = tuple(ngram.split(" "))
        if len(key) != int(n):
            raise ConfigError(f"{path}: length mismatch on {ngram!r}")
        counts[key] = int(raw)
        doc_ranges[key] = int(rng)
        window_totals[int(n)] = window_totals.get(int(n), 0) + int(raw)
    return BundleTable(
        counts=counts,
        doc_ranges=doc_ranges,
        corpus_total_tokens=int(meta["corpus_total_tokens"]),
        n_min=int(meta["n_min"]),
        n_max=int(meta["n_max"]),
        window_totals=dict(sorted(window_totals.items())),
    )
