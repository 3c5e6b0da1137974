"""Lexical-bundle extraction, scoring, filtering and classification."""

from .association import apply_mi_threshold, mutual_information, score_all
from .classify import (
    FunctionalCategory,
    category_histogram,
    classify_function,
    classify_structure,
)
from .corpus import Corpus, Document, Token, load_corpus, strip_noise_lines, tokenize
from .counting import (
    BundleStats,
    BundleTable,
    count_ngrams,
    coverage_stat,
    size_distribution,
    top_k,
)
from .filters import (
    FilterConfig,
    FilterVerdict,
    fragment_occurrence_ratio,
    run_filters,
)
from .lexicons import LexiconSet, default_lexicons, load_lexicons

__version__ = "0.1.0"
