import io
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lexbundles.counting import (
    ConfigError,
    UndefinedStatisticError,
    count_ngrams,
    count_ngrams_sharded,
    coverage_stat,
    read_table_tsv,
    size_distribution,
    top_k,
    write_table_tsv,
)

from conftest import make_corpus, random_corpus


def brute_force_counts(corpus, n_min, n_max):
    """Independent sliding-window recount (the oracle)."""
    counts = {}
    ranges = {}
    for doc in corpus.documents:
        s = [t.surface for t in doc.tokens]
        seen = set()
        for n in range(n_min, n_max + 1):
            for i in range(len(s) - n + 1):
                key = tuple(s[i : i + n])
                counts[key] = counts.get(key, 0) + 1
                seen.add(key)
        for key in seen:
            ranges[key] = ranges.get(key, 0) + 1
    return counts, ranges


small_corpora = st.dictionaries(
    st.sampled_from([f"d{i}" for i in range(4)]),
    st.lists(st.sampled_from(["a", "b", "c", "d"]), max_size=60),
    min_size=1,
    max_size=4,
)


class TestCountNgrams:
    def test_ababab_bigrams(self, ababab):
        table = count_ngrams(ababab, 2, 2)
        assert table.counts == {("a", "b"): 3, ("b", "a"): 2}
        assert table.window_totals[2] == 5

    def test_unigrams_are_token_multiset(self):
        corpus = make_corpus({"d0": ["x", "y", "x", "z", "x"]})
        table = count_ngrams(corpus, 1, 1)
        assert table.counts == {("x",): 3, ("y",): 1, ("z",): 1}

    def test_doc_range_across_documents(self):
        corpus = make_corpus(
            {"d0": ["can", "be", "nice"], "d1": ["it", "can", "be"]}
        )
        table = count_ngrams(corpus, 2, 2)
        assert table.counts[("can", "be")] == 2
        assert table.doc_ranges[("can", "be")] == 2

    def test_invalid_range(self, ababab):
        with pytest.raises(ConfigError):
            count_ngrams(ababab, 0, 3)
        with pytest.raises(ConfigError):
            count_ngrams(ababab, 3, 2)
        with pytest.raises(ConfigError):
            count_ngrams(ababab, 1, 6)

    def test_matches_oracle_on_random_corpora(self):
        rng = random.Random(7)
        for _ in range(25):
            corpus = random_corpus(rng, max_tokens=300)
            table = count_ngrams(corpus, 1, 5)
            counts, ranges = brute_force_counts(corpus, 1, 5)
            assert table.counts == counts
            assert table.doc_ranges == ranges

    @given(small_corpora)
    @settings(max_examples=60, deadline=None)
    def test_window_sum_invariant(self, docs):
        corpus = make_corpus(docs)
        table = count_ngrams(corpus, 1, 5)
        for n in range(1, 6):
            total = sum(c for k, c in table.counts.items() if len(k) == n)
            expected = sum(max(0, len(d) - n + 1) for d in corpus.documents)
            assert total == expected
            assert table.window_totals[n] == expected

    @given(small_corpora, st.integers(min_value=1, max_value=5))
    @settings(max_examples=40, deadline=None)
    def test_shard_merge_determinism(self, docs, shards):
        corpus = make_corpus(docs)
        single = count_ngrams(corpus, 1, 4)
        sharded = count_ngrams_sharded(corpus, 1, 4, shards=shards)
        assert single.counts == sharded.counts
        assert single.doc_ranges == sharded.doc_ranges
        assert single.window_totals == sharded.window_totals

    def test_monotone_under_added_document(self):
        rng = random.Random(3)
        base = random_corpus(rng, max_tokens=200)
        docs = {d.id: [t.surface for t in d.tokens] for d in base.documents}
        docs["zz_extra"] = ["a", "b", "a"]
        bigger = make_corpus(docs)
        before = count_ngrams(base, 1, 3)
        after = count_ngrams(bigger, 1, 3)
        for key, freq in before.counts.items():
            assert after.counts[key] >= freq
            assert after.doc_ranges[key] >= before.doc_ranges[key]


class TestStats:
    def test_stats_values(self, ababab):
        table = count_ngrams(ababab, 1, 2)
        s = table.stats(("a", "b"))
        assert s.raw_freq == 3
        assert s.doc_range == 1
        assert s.freq_per_million == pytest.approx(3 * 1e6 / 6)

    def test_raw_freq_at_least_doc_range(self):
        rng = random.Random(11)
        corpus = random_corpus(rng, max_tokens=400)
        table = count_ngrams(corpus, 1, 3)
        for key in table.counts:
            assert table.counts[key] >= table.doc_ranges[key] >= 1


class TestSizeDistribution:
    def test_counts_by_length(self, ababab):
        table = count_ngrams(ababab, 1, 3)
        selected = {("a", "b"), ("b", "a"), ("a", "b", "a")}
        assert size_distribution(table, selected) == {2: 2, 3: 1}

    def test_empty_selection(self, ababab):
        table = count_ngrams(ababab, 1, 2)
        assert size_distribution(table, set()) == {}

    def test_three_bigrams(self):
        corpus = make_corpus({"d0": ["a", "b", "c", "d"]})
        table = count_ngrams(corpus, 2, 2)
        sel = {("a", "b"), ("b", "c"), ("c", "d")}
        assert size_distribution(table, sel) == {2: 3}

    def test_rejects_unknown_key(self, ababab):
        table = count_ngrams(ababab, 2, 2)
        with pytest.raises(KeyError):
            size_distribution(table, {("z", "z")})


class TestCoverage:
    def test_basic_fraction(self):
        tokens = ["x", "y"] * 5 + ["filler"] * 90
        corpus = make_corpus({"d0": tokens})
        table = count_ngrams(corpus, 1, 2)
        assert coverage_stat(table, {("x", "y")}, corpus) == pytest.approx(0.10)

    def test_empty_selection(self, ababab):
        table = count_ngrams(ababab, 1, 2)
        assert coverage_stat(table, set(), ababab) == 0.0

    def test_full_coverage(self, ababab):
        table = count_ngrams(ababab, 1, 2)
        assert coverage_stat(table, {("a", "b")}, ababab) == pytest.approx(1.0)

    def test_empty_corpus_error(self):
        corpus = make_corpus({"d0": []})
        table = count_ngrams(corpus, 1, 2)
        with pytest.raises(UndefinedStatisticError):
            coverage_stat(table, set(), corpus)


class TestTopK:
    def test_ababab_top1(self, ababab):
        table = count_ngrams(ababab, 2, 2)
        assert top_k(table, 1, length_filter=2)[0][0] == ("a", "b")

    def test_k_zero(self, ababab):
        table = count_ngrams(ababab, 1, 2)
        assert top_k(table, 0) == []

    def test_lexicographic_tie_break(self):
        corpus = make_corpus({"d0": ["b", "x", "a", "y"]})
        table = count_ngrams(corpus, 1, 1)
        keys = [k for k, _ in top_k(table, 4, length_filter=1)]
        assert keys == [("a",), ("b",), ("x",), ("y",)]

    def test_negative_k(self, ababab):
        table = count_ngrams(ababab, 1, 2)
        with pytest.raises(ConfigError):
            top_k(table, -1)


class TestTsvRoundTrip:
    def test_round_trip(self, tmp_path, ababab):
        table = count_ngrams(ababab, 1, 3)
        buf = io.StringIO()
        write_table_tsv(table, buf)
        path = tmp_path / "counts.tsv"
        path.write_text(buf.getvalue())
        loaded = read_table_tsv(path)
        assert loaded.counts == table.counts
        assert loaded.doc_ranges == table.doc_ranges
        assert loaded.corpus_total_tokens == table.corpus_total_tokens
        assert loaded.window_totals == table.window_totals

    def test_export_is_sorted(self, ababab):
        table = count_ngrams(ababab, 1, 2)
        buf = io.StringIO()
        write_table_tsv(table, buf)
        rows = buf.getvalue().splitlines()[2:]
        parsed = [(int(r.split("\t")[1]), -int(r.split("\t")[2]), r.split("\t")[0])
                  for r in rows]
        assert parsed == sorted(parsed)
