"""Corpus loading, noise-line stripping and tokenization."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

__all__ = [
    "Token",
    "Document",
    "Corpus",
    "CorpusLoadError",
    "tokenize",
    "strip_noise_lines",
    "load_corpus",
    "read_manifest",
]

SOURCE_KINDS = ("book", "journal", "thesis", "unknown")
CHAR_CLASSES = ("word", "numeric", "symbol", "mixed")

DEFAULT_NOISE_RATIO = 0.5


class CorpusLoadError(Exception):
    """Raised when a corpus file cannot be read or decoded."""


@dataclass(frozen=True, slots=True)
class Token:
    """A normalized word unit with a coarse character-class tag."""

    surface: str
    char_class: str

    def __post_init__(self):
        if not self.surface or any(c.isspace() for c in self.surface):
            raise ValueError(f"bad token surface: {self.surface!r}")
        if self.char_class not in CHAR_CLASSES:
            raise ValueError(f"bad char_class: {self.char_class!r}")


def classify_chars(surface: str) -> str:
    """Tag a surface as word/numeric/symbol/mixed.

    word: alphabetic throughout, with apostrophes/hyphens allowed inside;
    numeric: digits only; symbol: no alphanumeric character at all;
    mixed: anything else (e.g. "181â" is not all-alpha, "x2" has both).
    """
    if surface.isdigit():
        return "numeric"
    if all(c.isalpha() or c in "'-" for c in surface) and any(
        c.isalpha() for c in surface
    ):
        return "word"
    if not any(c.isalnum() for c in surface):
        return "symbol"
    return "mixed"


# Tokens reused across documents; vocabulary is far smaller than the corpus.
_token_cache: dict[str, Token] = {}


def make_token(surface: str) -> Token:
    tok = _token_cache.get(surface)
    if tok is None:
        tok = Token(surface, classify_chars(surface))
        _token_cache[surface] = tok
    return tok


# Anything that is not a letter, digit, apostrophe or hyphen separates tokens.
_SEPARATOR = re.compile(r"[^\w'-]+|_+", re.UNICODE)


def tokenize(text: str) -> list[Token]:
    """Lowercase and split text into tokens.

    Punctuation other than intra-word apostrophes and hyphens acts as a
    separator and is dropped. Leading/trailing apostrophes and hyphens are
    trimmed so "'em--" comes out as "em".
    """
    out = []
    for piece in _SEPARATOR.split(text.lower()):
        piece = piece.strip("'-")
        if piece:
            out.append(make_token(piece))
    return out


def _line_is_noise(line: str, max_ratio: float) -> bool:
    chars = [c for c in line if not c.isspace()]
    if not chars:
        return False
    non_alpha = sum(1 for c in chars if not ("a" <= c.lower() <= "z" or c in "'-"))
    if non_alpha / len(chars) > max_ratio:
        return True
    # Formula-like lines (x = p(w) log p(w)) keep an alphabetic majority per
    # character but almost no real words; judge the tokens as well.
    words = line.split()
    bad = sum(
        1 for w in words if not all("a" <= c.lower() <= "z" or c in "'-" for c in w)
    )
    return bad / len(words) > max_ratio


def strip_noise_lines(text: str, max_ratio: float = DEFAULT_NOISE_RATIO) -> str:
    """Drop lines dominated by non-alphabetic material (formulas, page refs).

    A line is removed when the share of non-alphabetic characters (spaces
    excluded) exceeds ``max_ratio``, or when more than that share of its
    whitespace tokens contain non-alphabetic characters. All other lines pass
    through unchanged, so the operation is idempotent.
    """
    kept = [ln for ln in text.split("\n") if not _line_is_noise(ln, max_ratio)]
    return "\n".join(kept)


@dataclass(frozen=True, slots=True)
class Document:
    """A tokenized text with its identity and source kind."""

    id: str
    tokens: tuple[Token, ...]
    source_kind: str = "unknown"

    def __post_init__(self):
        if self.source_kind not in SOURCE_KINDS:
            raise ValueError(f"bad source_kind: {self.source_kind!r}")

    @property
    def surfaces(self) -> list[str]:
        return [t.surface for t in self.tokens]

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class Corpus:
    documents: tuple[Document, ...]
    total_tokens: int = field(init=False)

    def __post_init__(self):
        ids = [d.id for d in self.documents]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate document ids in corpus")
        object.__setattr__(
            self, "total_tokens", sum(len(d) for d in self.documents)
        )

    def __len__(self) -> int:
        return len(self.documents)


def read_manifest(path: str | Path) -> dict[str, str]:
    """Read a `filename<TAB>kind` manifest into a mapping."""
    mapping: dict[str, str] = {}
    for i, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        try:
            name, kind = line.split("\t")
        except ValueError:
            raise CorpusLoadError(f"{path}:{i}: expected filename<TAB>kind")
        if kind not in SOURCE_KINDS:
            raise CorpusLoadError(f"{path}:{i}: unknown source kind {kind!r}")
        mapping[name] = kind
    return mapping


def load_corpus(
    paths: Iterable[str | Path],
    source_kinds: Mapping[str, str] | None = None,
    noise_ratio: float = DEFAULT_NOISE_RATIO,
) -> Corpus:
    """Load one document per file, stripping noise lines before tokenizing.

    Documents are ordered by id (the file stem). Empty documents are kept.
    """
    source_kinds = source_kinds or {}
    docs = []
    for p in sorted(Path(p) for p in paths):
        try:
            text = p.read_text(encoding="utf-8")
        except OSError as e:
            raise CorpusLoadError(f"cannot read corpus file {p}: {e}") from e
        except UnicodeDecodeError as e:
            raise CorpusLoadError(f"corpus file {p} is not valid UTF-8: {e}") from e
        kind = source_kinds.get(p.name, source_kinds.get(p.stem, "unknown"))
        tokens = tuple(tokenize(strip_noise_lines(text, noise_ratio)))
        docs.append(Document(id=p.stem, tokens=tokens, source_kind=kind))
    docs.sort(key=lambda d: d.id)
    return Corpus(tuple(docs))


def corpus_from_token_lists(
    token_lists: Mapping[str, Sequence[str]],
    source_kinds: Mapping[str, str] | None = None,
) -> Corpus:
    """Build a corpus directly from surface lists (tests, synthetic data)."""
    source_kinds = source_kinds or {}
    docs = tuple(
        Document(
            id=doc_id,
            tokens=tuple(make_token(s) for s in surfaces),
            source_kind=source_kinds.get(doc_id, "unknown"),
        )
        for doc_id, surfaces in sorted(token_lists.items())
    )
    return Corpus(docs)
