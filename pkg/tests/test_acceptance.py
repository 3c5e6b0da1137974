"""Acceptance suite: fixture- and property-based exit criteria.

Each test is one criterion; the terminal summary prints a PASS/FAIL line
per criterion (see conftest.pytest_terminal_summary).
"""

import csv
import io
import math
import random
import time

import pytest

from lexbundles.association import mutual_information
from lexbundles.classify import category_histogram, classify_function, classify_structure
from lexbundles.counting import (
    count_ngrams,
    count_ngrams_sharded,
    size_distribution,
    write_table_tsv,
)
from lexbundles.filters import FilterConfig, fragment_occurrence_ratio, run_filters
from lexbundles.lexicons import data_path

from conftest import make_corpus, random_corpus
from test_association import mi_oracle
from test_counting import brute_force_counts


def test_c01_counting_matches_brute_force_oracle():
    """200 random corpora of <= 2000 tokens, n=1..5: zero mismatches."""
    rng = random.Random(101)
    mismatches = 0
    for _ in range(200):
        corpus = random_corpus(rng, max_tokens=2000, vocab=12)
        table = count_ngrams(corpus, 1, 5)
        counts, ranges = brute_force_counts(corpus, 1, 5)
        if table.counts != counts or table.doc_ranges != ranges:
            mismatches += 1
    assert mismatches == 0


def test_c02_window_sum_invariant():
    rng = random.Random(202)
    for _ in range(100):
        corpus = random_corpus(rng, max_tokens=1000, vocab=6)
        table = count_ngrams(corpus, 1, 5)
        for n in range(1, 6):
            total = sum(c for k, c in table.counts.items() if len(k) == n)
            assert total == sum(
                max(0, len(d) - n + 1) for d in corpus.documents
            )


def test_c03_mi_matches_probability_oracle():
    # fixture values, confirmed by the oracle itself
    fixture = make_corpus({"d0": ["a", "b", "a", "b", "a", "b"]})
    table = count_ngrams(fixture, 1, 3)
    assert mi_oracle(fixture, ("a", "b")) == pytest.approx(1.2630, abs=5e-5)
    assert mutual_information(("a", "b"), table) == pytest.approx(
        math.log2((3 / 5) / 0.25), abs=1e-9
    )
    assert mutual_information(("a", "b", "a"), table) == pytest.approx(2.0, abs=1e-9)

    rng = random.Random(303)
    checked = 0
    for _ in range(30):
        corpus = random_corpus(rng, max_tokens=500, vocab=5)
        if corpus.total_tokens < 6:
            continue
        table = count_ngrams(corpus, 1, 5)
        multi = [k for k in sorted(table.counts) if len(k) >= 2]
        for key in multi[:40]:
            assert mutual_information(key, table) == pytest.approx(
                mi_oracle(corpus, key), abs=1e-9
            )
            checked += 1
    assert checked > 300


def _verdicts_by_key(verdicts):
    return {v.key: v for v in verdicts}


def test_c04_filter_fixtures_get_stated_reasons():
    permissive = FilterConfig(min_freq_per_million=0.0, min_doc_range=0)
    from lexbundles.lexicons import default_lexicons

    lex = default_lexicons()

    # numeric bundles
    corpus = make_corpus({"d0": ["page", "12"], "d1": ["from", "gate", "2", "in", "1999"]})
    table = count_ngrams(corpus, 1, 5)
    vm = _verdicts_by_key(run_filters(table, permissive, corpus, lex))
    assert vm[("page", "12")].reason == "contains_numeric"
    assert vm[("from", "gate", "2", "in", "1999")].reason == "contains_numeric"

    # noise bundles (raw extraction artifacts, constructed directly)
    corpus = make_corpus(
        {"d0": ["pp", "###â", "###"], "d1": ["â", "â", "â", "â"], "d2": ["t", "l", "t", "l"]}
    )
    table = count_ngrams(corpus, 1, 4)
    vm = _verdicts_by_key(run_filters(table, permissive, corpus, lex))
    assert vm[("pp", "###â", "###")].reason == "noise"
    assert vm[("â", "â", "â", "â")].reason == "noise"
    assert vm[("t", "l", "t", "l")].reason == "noise"

    # bundle ending in an article
    corpus = make_corpus({f"d{i}": ["in", "addition", "to", "the"] for i in range(3)})
    table = count_ngrams(corpus, 1, 4)
    vm = _verdicts_by_key(run_filters(table, permissive, corpus, lex))
    assert vm[("in", "addition", "to", "the")].reason == "ends_in_article"

    # meaningless bibliographic residue
    corpus = make_corpus({"d0": ["de", "bot", "t", "van", "els"]})
    table = count_ngrams(corpus, 1, 5)
    vm = _verdicts_by_key(run_filters(table, permissive, corpus, lex))
    assert vm[("de", "bot", "t", "van", "els")].reason == "meaningless"

    # fragment in an engineered-subsumption corpus: 4 of 5 occurrences of
    # "there is no" sit inside the kept longer bundle
    docs = {f"d{i}": ["there", "is", "no", "need", "to"] for i in range(4)}
    docs["d4"] = ["there", "is", "no"]
    corpus = make_corpus(docs)
    table = count_ngrams(corpus, 1, 5)
    vm = _verdicts_by_key(run_filters(table, permissive, corpus, lex))
    v = vm[("there", "is", "no")]
    assert v.reason == "fragment_of_larger"
    assert v.evidence == "there is no need to"


FRAGMENT_TOKENS = ["we", "can", "be", "used", "to", "can", "be", "used", "to", "can", "be"]


def test_c05_fragment_ratio_fixture_and_flip():
    corpus = make_corpus({"d0": FRAGMENT_TOKENS})
    ratio = fragment_occurrence_ratio(
        ("can", "be"), {("can", "be", "used", "to")}, corpus
    )
    assert ratio == 2 / 3

    from lexbundles.lexicons import default_lexicons

    lex = default_lexicons()
    table = count_ngrams(corpus, 2, 4)
    stop = frozenset(
        k for k in table.counts if len(k) > 2 and k != ("can", "be", "used", "to")
    )
    for threshold, expected in [(0.6, "excluded"), (0.7, "kept")]:
        cfg = FilterConfig(
            min_freq_per_million=0.0,
            min_doc_range=0,
            subsumption_ratio=threshold,
            stoplist=stop,
        )
        vm = _verdicts_by_key(run_filters(table, cfg, corpus, lex))
        assert vm[("can", "be")].status == expected


def test_c06_structural_classifier_matches_fixture():
    from lexbundles.lexicons import default_lexicons

    lex = default_lexicons()
    with open(data_path("structural_examples.tsv"), encoding="utf-8") as f:
        rows = list(csv.reader(f, delimiter="\t"))[1:]
    assert len(rows) >= 35
    failures = [
        (bundle, expected, classify_structure(tuple(bundle.split(" ")), lex))
        for bundle, expected in rows
        if classify_structure(tuple(bundle.split(" ")), lex) != expected
    ]
    assert failures == []


def test_c07_functional_gold_fidelity_and_modal_framing():
    from lexbundles.lexicons import default_lexicons

    lex = default_lexicons()
    assert lex.functional_gold
    cats = []
    for key, (orientation, sub) in lex.functional_gold.items():
        got = classify_function(key, lex)
        assert got.provenance == "gold_lookup", key
        assert (got.orientation, got.subcategory) == (orientation, sub), key
        cats.append(got)
    hist = category_histogram(cats)
    modal = max(hist.by_subcategory, key=hist.by_subcategory.get)
    assert modal == "framing"


def test_c08_bundle_list_reproduces_size_distribution():
    bundles = [
        tuple(line.split(" "))
        for line in data_path("bundle_list.txt").read_text(encoding="utf-8").splitlines()
        if line.strip()
    ]
    corpus = make_corpus(
        {f"d{i:03d}": list(b) for i, b in enumerate(bundles)}
    )
    table = count_ngrams(corpus, 1, 5)
    dist = size_distribution(table, bundles)
    assert dist == {2: 212, 3: 211, 4: 85, 5: 78}
    assert sum(dist.values()) == 586


def test_c09_sharded_exports_byte_identical():
    rng = random.Random(909)
    for trial in range(50):
        corpus = random_corpus(rng, max_tokens=600, vocab=7)
        shards = rng.randint(2, 6)
        single = io.StringIO()
        multi = io.StringIO()
        write_table_tsv(count_ngrams(corpus, 1, 4), single)
        write_table_tsv(count_ngrams_sharded(corpus, 1, 4, shards=shards), multi)
        assert single.getvalue() == multi.getvalue(), f"trial {trial}"


@pytest.mark.slow
def test_c10_scale_8m_tokens_under_budget():
    psutil = pytest.importorskip("psutil")
    from lexbundles.synthetic import zipf_corpus

    corpus = zipf_corpus(8_000_000, vocab_size=50_000, n_docs=200, seed=42)
    assert corpus.total_tokens == 8_000_000

    half = make_corpus(
        {d.id: [t.surface for t in d.tokens] for d in corpus.documents[:100]}
    )

    import gc

    def timed_once(c):
        gc.collect()
        gc.disable()
        try:
            t0 = time.perf_counter()
            result = count_ngrams(c, 1, 5)
            return time.perf_counter() - t0, result
        finally:
            gc.enable()

    # warm both sizes (first-touch page faults dominate cold runs), then
    # interleave half/full rounds and take the minimum of each: timing
    # noise on a shared host is one-sided, so min estimates true cost
    timed_once(half)
    timed_once(corpus)
    halves, fulls = [], []
    for _ in range(3):
        halves.append(timed_once(half)[0])
        t, table = timed_once(corpus)
        fulls.append(t)
    t_half = min(halves)
    t_full = min(fulls)

    rss_gb = psutil.Process().memory_info().rss / 2**30
    assert t_full < 120.0, f"counting took {t_full:.1f}s"
    assert rss_gb < 8.0, f"resident set {rss_gb:.2f} GiB"
    assert t_full <= 2.5 * t_half, (
        f"doubling corpus scaled {t_full / t_half:.2f}x (> 2.5x)"
    )
    assert len(table) > 0
