"""Mutual information scoring of bundles against their component unigrams."""

from __future__ import annotations

import math
from typing import Iterable, TextIO

from .counting import BundleTable, NgramKey, UndefinedStatisticError

__all__ = [
    "MissingUnigramsError",
    "mutual_information",
    "score_all",
    "apply_mi_threshold",
    "write_scores_tsv",
]


class MissingUnigramsError(Exception):
    """The table lacks unigram counts needed for MI; recount with n_min=1."""


def mutual_information(key: NgramKey, table: BundleTable) -> float:
    """log2 of observed n-gram probability over the independence baseline.

    The n-gram probability is raw_freq over the number of n-length windows;
    unigram probabilities are over tokens. Length-1 keys score exactly 0.
    """
    if key not in table.counts:
        raise KeyError(f"key not in table: {key}")
    n = len(key)
    if n == 1:
        return 0.0
    if table.n_min > 1:
        raise MissingUnigramsError(
            "unigram counts are missing; recount the corpus with n_min=1"
        )
    n_windows = table.window_totals.get(n, 0)
    n_tokens = table.window_totals.get(1, 0)
    if n_windows == 0 or n_tokens == 0:
        raise UndefinedStatisticError(f"no windows of length {n} in corpus")
    p_joint = table.counts[key] / n_windows
    log_p_indep = 0.0
    for surface in key:
        unigram = (surface,)
        if unigram not in table.counts:
            raise MissingUnigramsError(
                f"unigram {surface!r} missing from table; "
                "recount the corpus with n_min=1"
            )
        log_p_indep += math.log2(table.counts[unigram] / n_tokens)
    return math.log2(p_joint) - log_p_indep


def score_all(table: BundleTable) -> dict[NgramKey, float]:
    """MI score for every key in the table."""
    return {key: mutual_information(key, table) for key in table.counts}


def apply_mi_threshold(
    table: BundleTable,
    min_mi: float,
    scores: dict[NgramKey, float] | None = None,
) -> tuple[set[NgramKey], dict[NgramKey, float]]:
    """Partition keys into (passing, failing-with-score) at a threshold.

    Score >= threshold passes. Length-1 keys always pass: MI carries no
    selection signal for unigrams.
    """
    if scores is None:
        scores = score_all(table)
    passing: set[NgramKey] = set()
    failing: dict[NgramKey, float] = {}
    for key in table.counts:
        if len(key) == 1 or scores[key] >= min_mi:
            passing.add(key)
        else:
            failing[key] = scores[key]
    return passing, failing


def write_scores_tsv(scores: dict[NgramKey, float], out: TextIO) -> None:
    out.write("ngram\tmi_bits\n")
    for key in sorted(scores, key=lambda k: (len(k), k)):
        out.write(f"{' '.join(key)}\t{scores[key]:.6f}\n")
