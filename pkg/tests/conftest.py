import random

import pytest


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance criterion at the end of the run."""
    rows = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            if "test_acceptance" in rep.nodeid and rep.when == "call":
                name = rep.nodeid.split("::")[-1]
                rows.append((name, "PASS" if rep.passed else "FAIL"))
    if rows:
        terminalreporter.write_line("")
        terminalreporter.write_line("acceptance criteria:")
        for name, status in sorted(rows):
            terminalreporter.write_line(f"  {name}: {status}")

from lexbundles.corpus import Corpus, corpus_from_token_lists
from lexbundles.lexicons import default_lexicons


@pytest.fixture(scope="session")
def lexicons():
    return default_lexicons()


def make_corpus(token_lists: dict[str, list[str]]) -> Corpus:
    return corpus_from_token_lists(token_lists)


def random_corpus(rng: random.Random, max_tokens: int = 2000,
                  vocab: int = 8) -> Corpus:
    """Small random corpus for oracle-equivalence checks."""
    words = [f"w{i}" for i in range(vocab)]
    n_docs = rng.randint(1, 6)
    docs = {}
    remaining = rng.randint(0, max_tokens)
    for d in range(n_docs):
        size = rng.randint(0, remaining)
        remaining -= size
        docs[f"d{d}"] = [rng.choice(words) for _ in range(size)]
    return make_corpus(docs)


@pytest.fixture
def ababab():
    return make_corpus({"d0": ["a", "b", "a", "b", "a", "b"]})
