"""Structural and functional classification of kept bundles."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

from .counting import NgramKey
from .lexicons import ORIENTATION_SUBCATEGORIES, LexiconSet

__all__ = [
    "STRUCTURAL_CATEGORIES",
    "FunctionalCategory",
    "CategoryHistogram",
    "classify_structure",
    "classify_function",
    "category_histogram",
    "write_classification_tsv",
]

STRUCTURAL_CATEGORIES = (
    "np_of_fragment",
    "np_other_postmodifier",
    "pp_embedded_of",
    "pp_other",
    "anticipatory_it",
    "passive_vp_pp",
    "copula_be_np_adj",
    "vp_that_clause",
    "verb_adj_to_clause",
    "adverbial_clause",
    "pronoun_np_be",
    "other_expressions",
)

IRREGULAR_PARTICIPLES = frozenset(
    {"shown", "seen", "found", "known", "given", "used", "based", "noted"}
)

CLAUSE_STARTERS = frozenset({"as", "when", "if"})
SUBJECT_STARTERS = frozenset({"there", "this"})
POSTMODIFIER_CUES = frozenset({"which", "between", "that"})


@dataclass(frozen=True, slots=True)
class FunctionalCategory:
    orientation: str  # research | text | participant
    subcategory: str
    provenance: str  # gold_lookup | pattern | unknown

    def __post_init__(self):
        if self.subcategory not in ORIENTATION_SUBCATEGORIES[self.orientation]:
            raise ValueError(
                f"subcategory {self.subcategory!r} not valid for "
                f"orientation {self.orientation!r}"
            )


def _is_participle(token: str, lex: LexiconSet) -> bool:
    if token in IRREGULAR_PARTICIPLES:
        return True
    return len(token) > 3 and token.endswith("ed") and not token.endswith("eed")


def _is_verbish(token: str, lex: LexiconSet) -> bool:
    return (
        token in lex.common_verbs
        or token in lex.copula_forms
        or _is_participle(token, lex)
    )


def classify_structure(key: NgramKey, lex: LexiconSet) -> str:
    """First-match rule cascade over closed-class cues; total function."""
    t = list(key)
    n = len(t)
    if n < 2:
        return "other_expressions"

    verbs = lex.common_verbs
    copula = lex.copula_forms
    modal = lex.modal_verbs

    # 1. anticipatory it + verb/adjective phrase
    if t[0] == "it" and (t[1] in copula or t[1] in modal):
        return "anticipatory_it"

    # 2. pronoun / "there" / "this" + copula or auxiliary
    if (t[0] in lex.pronouns or t[0] in SUBJECT_STARTERS) and (
        t[1] in copula or t[1] in lex.auxiliaries
    ):
        return "pronoun_np_be"

    # 3. passive: copula, then a participle, then a preposition after it
    if t[0] in copula:
        for i in range(1, n):
            if _is_participle(t[i], lex):
                if any(tok in lex.prepositions for tok in t[i + 1 :]):
                    return "passive_vp_pp"
                break

    # 4. copula first (optionally after a modal), no participle, and no
    #    adjective-to sequence that would make it a to-clause fragment
    head = t[1:] if t[0] in modal else t
    if head and head[0] in copula and not any(_is_participle(x, lex) for x in t):
        adj_to = any(
            t[i] in lex.adjectives and t[i + 1] == "to" for i in range(n - 1)
        )
        if not adj_to:
            return "copula_be_np_adj"

    # 5. that-clause after a verb (or clause-initial "that" + verbal material)
    for i, tok in enumerate(t):
        if tok != "that":
            continue
        if i > 0 and _is_verbish(t[i - 1], lex):
            return "vp_that_clause"
        if i == 0 and any(
            x in copula or x in verbs or x in modal for x in t[1:]
        ):
            return "vp_that_clause"

    # 6. to-clause preceded by a verb or adjective
    for i in range(n - 1):
        if t[i + 1] == "to" and (t[i] in lex.adjectives or _is_verbish(t[i], lex)):
            return "verb_adj_to_clause"

    # 7. adverbial clause fragment: as/when/if + verbal material
    if t[0] in CLAUSE_STARTERS and any(_is_verbish(x, lex) for x in t[1:]):
        return "adverbial_clause"

    # 8-9. prepositional fragments
    if t[0] in lex.prepositions:
        if "of" in t[1:]:
            return "pp_embedded_of"
        return "pp_other"

    # 10-11. noun-phrase fragments: article or open-class (noun-like) start
    closed = (
        lex.prepositions
        | lex.pronouns
        | copula
        | modal
        | lex.auxiliaries
        | CLAUSE_STARTERS
        | {"not", "and", "or", "but"}
    )
    if t[0] in lex.articles or t[0] not in closed:
        if "of" in t[1:]:
            return "np_of_fragment"
        has_as_to = any(t[i] == "as" and t[i + 1] == "to" for i in range(n - 1))
        if any(tok in POSTMODIFIER_CUES for tok in t[1:]) or has_as_to:
            return "np_other_postmodifier"

    return "other_expressions"


def _contains_run(t: Sequence[str], run: Sequence[str]) -> bool:
    m = len(run)
    return any(tuple(t[i : i + m]) == tuple(run) for i in range(len(t) - m + 1))


def classify_function(key: NgramKey, lex: LexiconSet) -> FunctionalCategory:
    """Gold-table lookup, then cue-pattern fallback; total function."""
    gold = lex.functional_gold.get(tuple(key))
    if gold is not None:
        return FunctionalCategory(gold[0], gold[1], "gold_lookup")

    t = list(key)
    if any(tok in lex.quantity_nouns for tok in t):
        return FunctionalCategory("research", "quantification", "pattern")
    if any(tok in ("figure", "fig", "table", "section", "chapter") for tok in t):
        return FunctionalCategory("research", "location", "pattern")
    if (
        any(tok in ("i'm", "we're", "you're") for tok in t)
        or _contains_run(t, ("going", "to"))
        or _contains_run(t, ("you", "can", "see"))
    ):
        return FunctionalCategory("participant", "engagement", "pattern")
    if (
        any(tok.startswith("result") or tok == "likely" for tok in t)
        or _contains_run(t, ("turn", "out"))
        or _contains_run(t, ("turns", "out"))
    ):
        return FunctionalCategory("text", "resultative", "pattern")
    if _contains_run(t, ("on", "the", "other", "hand")) or _contains_run(
        t, ("on", "the", "one", "hand")
    ):
        return FunctionalCategory("text", "transition", "pattern")
    if (
        any(tok in ("noted", "extent", "degree") for tok in t)
        or _contains_run(t, ("way", "that"))
    ):
        return FunctionalCategory("text", "framing", "pattern")
    if "example" in t:
        return FunctionalCategory("participant", "stance", "pattern")
    if (
        any(tok in ("referred", "defined") for tok in t)
        or _contains_run(t, ("known", "as"))
    ):
        return FunctionalCategory("research", "description", "pattern")
    if _contains_run(t, ("of", "the")) or _contains_run(t, ("fact", "that")):
        return FunctionalCategory("text", "structuring", "pattern")
    return FunctionalCategory("text", "structuring", "unknown")


@dataclass(frozen=True)
class CategoryHistogram:
    by_subcategory: dict[str, int]
    by_orientation: dict[str, int]
    total: int


def category_histogram(assignments: Iterable[FunctionalCategory]) -> CategoryHistogram:
    subs: Counter[str] = Counter()
    oris: Counter[str] = Counter()
    total = 0
    for a in assignments:
        subs[a.subcategory] += 1
        oris[a.orientation] += 1
        total += 1
    return CategoryHistogram(
        by_subcategory=dict(sorted(subs.items())),
        by_orientation=dict(sorted(oris.items())),
        total=total,
    )


def write_classification_tsv(
    rows: Iterable[tuple[NgramKey, str, FunctionalCategory]], out: TextIO
) -> None:
    out.write("ngram\tstructural\torientation\tsubcategory\tprovenance\n")
    assignments = []
    for key, structural, func in rows:
        assignments.append(func)
        out.write(
            f"{' '.join(key)}\t{structural}\t{func.orientation}"
            f"\t{func.subcategory}\t{func.provenance}\n"
        )
    hist = category_histogram(assignments)
    for sub, count in hist.by_subcategory.items():
        out.write(f"# subcategory\t{sub}\t{count}\n")
    for ori, count in hist.by_orientation.items():
        out.write(f"# orientation\t{ori}\t{count}\n")
