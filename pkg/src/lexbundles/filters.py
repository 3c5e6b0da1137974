"""Exclusion-filter cascade producing a kept set and an audited ledger."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence, TextIO

from .association import score_all
from .corpus import Corpus, make_token
from .counting import BundleTable, NgramKey, UndefinedStatisticError
from .lexicons import LexiconSet

__all__ = [
    "FilterConfig",
    "FilterVerdict",
    "REASONS",
    "contains_numeric",
    "is_noise",
    "ends_in_article",
    "is_meaningless",
    "fragment_occurrence_ratio",
    "run_filters",
    "write_ledger_tsv",
]

# Fixed check order; the first failing check is the recorded reason.
REASONS = (
    "stoplisted",
    "below_min_freq",
    "below_min_range",
    "low_mi",
    "noise",
    "contains_numeric",
    "meaningless",
    "ends_in_article",
    "fragment_of_larger",
)

ARTICLES = frozenset({"a", "an", "the"})
SINGLE_CHAR_WORDS_OK = frozenset({"a", "i"})
ALLOWED_CHARS = frozenset("abcdefghijklmnopqrstuvwxyz0123456789'-")


@dataclass(frozen=True)
class FilterConfig:
    min_freq_per_million: float = 10.0
    min_doc_range: int = 3
    min_mi: float | None = None
    subsumption_ratio: float = 0.8
    apply_article_rule: bool = True
    stoplist: frozenset[NgramKey] = frozenset()

    def __post_init__(self):
        if self.min_freq_per_million < 0 or self.min_doc_range < 0:
            raise ValueError("thresholds must be non-negative")
        if not (0 < self.subsumption_ratio <= 1):
            raise ValueError("subsumption_ratio must be in (0, 1]")


@dataclass(frozen=True, slots=True)
class FilterVerdict:
    key: NgramKey
    status: str  # "kept" | "excluded"
    reason: str | None = None
    evidence: str | None = None


def _char_class(surface: str) -> str:
    return make_token(surface).char_class


def contains_numeric(key: NgramKey) -> bool:
    """Any token with digits in it (numeric or mixed class)."""
    return any(_char_class(t) in ("numeric", "mixed") for t in key)


def is_noise(key: NgramKey) -> bool:
    """Symbol tokens, mojibake/non-Latin characters, or all-single-letter runs."""
    if any(_char_class(t) == "symbol" for t in key):
        return True
    if any(c not in ALLOWED_CHARS for t in key for c in t):
        return True
    return all(len(t) == 1 for t in key)


def ends_in_article(key: NgramKey) -> bool:
    return key[-1] in ARTICLES


def is_meaningless(key: NgramKey, lexicons: LexiconSet) -> bool:
    """Bibliographic residue: stop-fragments or stray single-letter tokens."""
    if any(t in lexicons.stop_fragments for t in key):
        return True
    singles = [t for t in key if len(t) == 1 and _char_class(t) == "word"]
    if any(t not in SINGLE_CHAR_WORDS_OK for t in singles):
        return True
    return len(singles) * 2 >= len(key) and bool(singles)


def _occurrences(doc_surfaces: Sequence[str], key: NgramKey) -> list[int]:
    n = len(key)
    return [
        i
        for i in range(len(doc_surfaces) - n + 1)
        if tuple(doc_surfaces[i : i + n]) == key
    ]


def fragment_occurrence_ratio(
    short: NgramKey,
    longer_kept: Iterable[NgramKey],
    corpus: Corpus,
) -> float:
    """Share of the short bundle's occurrences lying inside a longer one.

    An occurrence counts as covered when its span fits within the span of a
    single occurrence of any bundle in ``longer_kept``.
    """
    covered, ratio, _ = _fragment_coverage(short, longer_kept, corpus)
    return ratio


def _fragment_coverage(
    short: NgramKey,
    longer_kept: Iterable[NgramKey],
    corpus: Corpus,
):
    longer = sorted(k for k in set(longer_kept) if len(k) > len(short))
    n = len(short)
    total = 0
    covered = 0
    coverers: dict[NgramKey, int] = {}
    for doc in corpus.documents:
        surfaces = doc.surfaces
        short_pos = _occurrences(surfaces, short)
        if not short_pos:
            continue
        total += len(short_pos)
        spans = [
            (j, j + len(lk), lk)
            for lk in longer
            for j in _occurrences(surfaces, lk)
        ]
        for i in short_pos:
            covering = [lk for j, end, lk in spans if j <= i and i + n <= end]
            if covering:
                covered += 1
                for lk in covering:
                    coverers[lk] = coverers.get(lk, 0) + 1
    if total == 0:
        raise UndefinedStatisticError(f"{' '.join(short)!r} never occurs in corpus")
    best = min(coverers, key=lambda k: (-coverers[k], k)) if coverers else None
    return covered, covered / total, best


def run_filters(
    table: BundleTable,
    config: FilterConfig,
    corpus: Corpus,
    lexicons: LexiconSet,
    scores: dict[NgramKey, float] | None = None,
) -> list[FilterVerdict]:
    """Apply every exclusion check to every key in the table.

    Per-key checks run in the fixed REASONS order. The fragment check then
    runs longest-first so shorter bundles are judged against the longer
    bundles that actually survived; verdicts come back sorted by descending
    length, then lexicographically.
    """
    if config.min_mi is not None and scores is None:
        scores = score_all(table)

    verdicts: dict[NgramKey, FilterVerdict] = {}
    survivors: list[NgramKey] = []
    for key in table.counts:
        stats = table.stats(key)
        if key in config.stoplist:
            verdict = FilterVerdict(key, "excluded", "stoplisted")
        elif stats.freq_per_million < config.min_freq_per_million:
            verdict = FilterVerdict(
                key, "excluded", "below_min_freq", f"{stats.freq_per_million:.6f}"
            )
        elif stats.doc_range < config.min_doc_range:
            verdict = FilterVerdict(
                key, "excluded", "below_min_range", str(stats.doc_range)
            )
        elif (
            config.min_mi is not None
            and len(key) > 1
            and scores[key] < config.min_mi
        ):
            verdict = FilterVerdict(key, "excluded", "low_mi", f"{scores[key]:.6f}")
        elif is_noise(key):
            verdict = FilterVerdict(key, "excluded", "noise")
        elif contains_numeric(key):
            verdict = FilterVerdict(key, "excluded", "contains_numeric")
        elif is_meaningless(key, lexicons):
            verdict = FilterVerdict(key, "excluded", "meaningless")
        elif config.apply_article_rule and ends_in_article(key):
            verdict = FilterVerdict(key, "excluded", "ends_in_article")
        else:
            survivors.append(key)
            continue
        verdicts[key] = verdict

    # Fragment pass: longest tier first, judged against already-kept longer
    # bundles only.
    kept_longer: set[NgramKey] = set()
    for n in range(table.n_max, table.n_min - 1, -1):
        tier = sorted(k for k in survivors if len(k) == n)
        tier_kept = []
        for key in tier:
            if kept_longer:
                covered, ratio, best = _fragment_coverage(key, kept_longer, corpus)
                if ratio >= config.subsumption_ratio:
                    verdicts[key] = FilterVerdict(
                        key,
                        "excluded",
                        "fragment_of_larger",
                        " ".join(best) if best else None,
                    )
                    continue
            tier_kept.append(key)
            verdicts[key] = FilterVerdict(key, "kept")
        kept_longer.update(tier_kept)

    order = sorted(table.counts, key=lambda k: (-len(k), k))
    return [verdicts[k] for k in order]


def write_ledger_tsv(verdicts: Iterable[FilterVerdict], out: TextIO) -> None:
    out.write("ngram\tstatus\treason\tevidence\n")
    for v in verdicts:
        out.write(
            f"{' '.join(v.key)}\t{v.status}\t{v.reason or ''}\t{v.evidence or ''}\n"
        )
