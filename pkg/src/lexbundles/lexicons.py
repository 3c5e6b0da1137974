"""Closed-class word lists and the functional gold table."""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

__all__ = ["LexiconSet", "LexiconError", "load_lexicons", "default_lexicons"]

WORD_SETS = (
    "articles",
    "prepositions",
    "pronouns",
    "copula_forms",
    "modal_verbs",
    "common_verbs",
    "quantity_nouns",
    "adjectives",
    "auxiliaries",
)

# Bibliographic residue that marks a bundle as meaningless.
STOP_FRAGMENTS = frozenset({"et", "al", "pp", "vol", "nj", "eds"})

ORIENTATION_SUBCATEGORIES = {
    "research": {"location", "procedure", "quantification", "description", "topic"},
    "text": {"transition", "resultative", "structuring", "framing"},
    "participant": {"stance", "engagement"},
}


class LexiconError(Exception):
    """Raised when lexicon or gold-table files are missing or malformed."""


@dataclass(frozen=True)
class LexiconSet:
    articles: frozenset[str]
    prepositions: frozenset[str]
    pronouns: frozenset[str]
    copula_forms: frozenset[str]
    modal_verbs: frozenset[str]
    common_verbs: frozenset[str]
    quantity_nouns: frozenset[str]
    adjectives: frozenset[str]
    auxiliaries: frozenset[str]
    functional_gold: dict[tuple[str, ...], tuple[str, str]]
    stop_fragments: frozenset[str] = STOP_FRAGMENTS

    def __post_init__(self):
        if self.articles & self.prepositions:
            raise LexiconError("articles and prepositions must be disjoint")


def _read_word_set(path: Path) -> frozenset[str]:
    words = frozenset(
        w.strip().lower() for w in path.read_text(encoding="utf-8").split() if w.strip()
    )
    if not words:
        raise LexiconError(f"empty lexicon file: {path}")
    return words


def _read_gold_table(path: Path) -> dict[tuple[str, ...], tuple[str, str]]:
    gold: dict[tuple[str, ...], tuple[str, str]] = {}
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines or lines[0] != "bundle\torientation\tsubcategory":
        raise LexiconError(f"{path}: bad gold-table header")
    for i, line in enumerate(lines[1:], 2):
        if not line.strip():
            continue
        try:
            bundle, orientation, sub = line.split("\t")
        except ValueError:
            raise LexiconError(f"{path}:{i}: expected 3 tab-separated columns")
        if sub not in ORIENTATION_SUBCATEGORIES.get(orientation, ()):
            raise LexiconError(
                f"{path}:{i}: subcategory {sub!r} not valid for {orientation!r}"
            )
        key = tuple(bundle.split(" "))
        gold.setdefault(key, (orientation, sub))
    return gold


def load_lexicons(lexicon_dir: str | Path, gold_path: str | Path) -> LexiconSet:
    """Load word-set files (one word per line) and the functional gold TSV."""
    lexicon_dir = Path(lexicon_dir)
    sets = {}
    for name in WORD_SETS:
        path = lexicon_dir / f"{name}.txt"
        if not path.is_file():
            raise LexiconError(f"missing lexicon file: {path}")
        sets[name] = _read_word_set(path)
    gold_path = Path(gold_path)
    if not gold_path.is_file():
        raise LexiconError(f"missing gold table: {gold_path}")
    return LexiconSet(functional_gold=_read_gold_table(gold_path), **sets)


def data_path(*parts: str) -> Path:
    return Path(resources.files("lexbundles").joinpath("data", *parts))


def default_lexicons() -> LexiconSet:
    """The lexicons and gold table shipped with the package."""
    return load_lexicons(data_path("lexicons"), data_path("functional_gold.tsv"))
