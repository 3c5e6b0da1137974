"""Command-line pipeline: extract, filter, classify, report, stats."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from . import association, classify, counting, filters
from .corpus import Corpus, CorpusLoadError, load_corpus, read_manifest
from .counting import BundleTable, ConfigError, NgramKey
from .lexicons import LexiconError, data_path, load_lexicons

EXIT_OK = 0
EXIT_IO = 1
EXIT_CONFIG = 2

FORMATS = ("tsv", "json", "pretty")


@dataclass
class RunConfig:
    inputs: list[Path]
    manifest: Path | None
    nmin: int
    nmax: int
    min_freq_pm: float
    min_range: int
    min_mi: float | None
    subsumption_ratio: float
    stoplist: Path | None
    lexicons: Path | None
    out: Path
    format: str
    threads: int
    top_k: int


DEFAULTS = dict(
    nmin=1,
    nmax=5,
    min_freq_pm=10.0,
    min_range=3,
    min_mi=None,
    subsumption_ratio=0.8,
    stoplist=None,
    lexicons=None,
    manifest=None,
    out="out",
    format="tsv",
    threads=1,
    top_k=50,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lexbundles",
        description="Extract, filter, classify and report lexical bundles "
        "from plain-text corpora.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("extract", "filter", "classify", "report", "stats"):
        p = sub.add_parser(name)
        p.add_argument("--input", nargs="+", required=True,
                       help="corpus directory or text files")
        p.add_argument("--manifest", help="filename<TAB>kind mapping file")
        p.add_argument("--config", help="key=value config file")
        p.add_argument("--nmin", type=int)
        p.add_argument("--nmax", type=int)
        p.add_argument("--min-freq-pm", type=float, dest="min_freq_pm")
        p.add_argument("--min-range", type=int, dest="min_range")
        p.add_argument("--min-mi", type=float, dest="min_mi")
        p.add_argument("--subsumption-ratio", type=float, dest="subsumption_ratio")
        p.add_argument("--stoplist")
        p.add_argument("--lexicons", help="directory with lexicon .txt files")
        p.add_argument("--format", choices=FORMATS)
        p.add_argument("--out", help="output directory")
        p.add_argument("--threads", type=int)
        p.add_argument("--top-k", type=int, dest="top_k")
    return parser


def _read_config_file(path: Path) -> dict[str, str]:
    values = {}
    for i, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{i}: expected key=value")
        key, value = line.split("=", 1)
        values[key.strip().replace("-", "_")] = value.strip()
    return values


_CONFIG_TYPES = dict(
    nmin=int, nmax=int, min_freq_pm=float, min_range=int, min_mi=float,
    subsumption_ratio=float, threads=int, top_k=int,
)


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Merge CLI flags over config-file values over defaults."""
    file_values: dict[str, object] = {}
    if args.config:
        cfg_path = Path(args.config)
        if not cfg_path.is_file():
            raise ConfigError(f"config file not found: {cfg_path}")
        for key, raw in _read_config_file(cfg_path).items():
            if key not in DEFAULTS:
                raise ConfigError(f"unknown config key: {key}")
            file_values[key] = _CONFIG_TYPES[key](raw) if key in _CONFIG_TYPES else raw

    def pick(name):
        flag = getattr(args, name, None)
        if flag is not None:
            return flag
        return file_values.get(name, DEFAULTS[name])

    inputs = []
    for raw in args.input:
        p = Path(raw)
        if p.is_dir():
            inputs.extend(sorted(p.glob("*.txt")))
        elif p.is_file():
            inputs.append(p)
        else:
            raise ConfigError(f"input path does not exist: {p}")
    if not inputs:
        raise ConfigError("no input files found")

    cfg = RunConfig(
        inputs=inputs,
        manifest=Path(pick("manifest")) if pick("manifest") else None,
        nmin=pick("nmin"),
        nmax=pick("nmax"),
        min_freq_pm=pick("min_freq_pm"),
        min_range=pick("min_range"),
        min_mi=pick("min_mi"),
        subsumption_ratio=pick("subsumption_ratio"),
        stoplist=Path(pick("stoplist")) if pick("stoplist") else None,
        lexicons=Path(pick("lexicons")) if pick("lexicons") else None,
        out=Path(pick("out")),
        format=pick("format"),
        threads=pick("threads"),
        top_k=pick("top_k"),
    )
    if not (1 <= cfg.nmin <= cfg.nmax <= counting.MAX_NGRAM):
        raise ConfigError(f"invalid n range {cfg.nmin}..{cfg.nmax}")
    if cfg.format not in FORMATS:
        raise ConfigError(f"invalid format: {cfg.format}")
    if cfg.manifest and not cfg.manifest.is_file():
        raise ConfigError(f"manifest file not found: {cfg.manifest}")
    if cfg.stoplist and not cfg.stoplist.is_file():
        raise ConfigError(f"stoplist file not found: {cfg.stoplist}")
    if cfg.threads < 1:
        raise ConfigError("threads must be >= 1")
    if cfg.top_k < 0:
        raise ConfigError("top-k must be >= 0")
    return cfg


def _load(cfg: RunConfig) -> Corpus:
    kinds = read_manifest(cfg.manifest) if cfg.manifest else None
    return load_corpus(cfg.inputs, source_kinds=kinds)


def _lexicons(cfg: RunConfig):
    if cfg.lexicons:
        gold = cfg.lexicons / "functional_gold.tsv"
        if not gold.is_file():
            gold = data_path("functional_gold.tsv")
        return load_lexicons(cfg.lexicons, gold)
    return load_lexicons(data_path("lexicons"), data_path("functional_gold.tsv"))


def _read_stoplist(path: Path) -> frozenset[NgramKey]:
    keys = set()
    for line in path.read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line:
            keys.add(tuple(line.split(" ")))
    return frozenset(keys)


def _get_table(cfg: RunConfig, corpus: Corpus) -> BundleTable:
    """Reuse a persisted count table when compatible, else recount."""
    counts_path = cfg.out / "counts.tsv"
    if counts_path.is_file():
        table = counting.read_table_tsv(counts_path)
        if (
            table.n_min == cfg.nmin
            and table.n_max == cfg.nmax
            and table.corpus_total_tokens == corpus.total_tokens
        ):
            return table
    return counting.count_ngrams_sharded(corpus, cfg.nmin, cfg.nmax, cfg.threads)


def _emit(cfg: RunConfig, lines: list[tuple[str, object]]) -> None:
    if cfg.format == "json":
        print(json.dumps(dict(lines), indent=2, sort_keys=True))
    elif cfg.format == "pretty":
        width = max(len(k) for k, _ in lines)
        for k, v in lines:
            print(f"{k:<{width}}  {v}")
    else:
        for k, v in lines:
            print(f"{k}\t{v}")


def cmd_extract(cfg: RunConfig) -> int:
    corpus = _load(cfg)
    table = counting.count_ngrams_sharded(corpus, cfg.nmin, cfg.nmax, cfg.threads)
    cfg.out.mkdir(parents=True, exist_ok=True)
    with open(cfg.out / "counts.tsv", "w", encoding="utf-8") as f:
        counting.write_table_tsv(table, f)
    summary: list[tuple[str, object]] = [
        ("documents", len(corpus)),
        ("total_tokens", corpus.total_tokens),
    ]
    per_len = {n: 0 for n in range(cfg.nmin, cfg.nmax + 1)}
    for key in table.counts:
        per_len[len(key)] += 1
    for n, count in per_len.items():
        summary.append((f"distinct_{n}grams", count))
    _emit(cfg, summary)
    return EXIT_OK


def cmd_filter(cfg: RunConfig) -> int:
    corpus = _load(cfg)
    table = _get_table(cfg, corpus)
    lex = _lexicons(cfg)
    fcfg = filters.FilterConfig(
        min_freq_per_million=cfg.min_freq_pm,
        min_doc_range=cfg.min_range,
        min_mi=cfg.min_mi,
        subsumption_ratio=cfg.subsumption_ratio,
        stoplist=_read_stoplist(cfg.stoplist) if cfg.stoplist else frozenset(),
    )
    cfg.out.mkdir(parents=True, exist_ok=True)
    scores = None
    if cfg.min_mi is not None:
        scores = association.score_all(table)
        with open(cfg.out / "mi_scores.tsv", "w", encoding="utf-8") as f:
            association.write_scores_tsv(scores, f)
    verdicts = filters.run_filters(table, fcfg, corpus, lex, scores=scores)
    with open(cfg.out / "ledger.tsv", "w", encoding="utf-8") as f:
        filters.write_ledger_tsv(verdicts, f)
    kept = [v.key for v in verdicts if v.status == "kept"]
    with open(cfg.out / "kept.txt", "w", encoding="utf-8") as f:
        for key in sorted(kept, key=lambda k: (len(k), k)):
            f.write(" ".join(key) + "\n")
    summary: list[tuple[str, object]] = [("kept", len(kept))]
    for reason in filters.REASONS:
        count = sum(1 for v in verdicts if v.reason == reason)
        summary.append((f"excluded_{reason}", count))
    _emit(cfg, summary)
    return EXIT_OK


def _read_kept(cfg: RunConfig) -> list[NgramKey]:
    kept_path = cfg.out / "kept.txt"
    if not kept_path.is_file():
        raise ConfigError(f"kept-bundle list not found (run filter first): {kept_path}")
    return [
        tuple(line.split(" "))
        for line in kept_path.read_text(encoding="utf-8").splitlines()
        if line.strip()
    ]


def cmd_classify(cfg: RunConfig) -> int:
    kept = _read_kept(cfg)
    lex = _lexicons(cfg)
    rows = [
        (key, classify.classify_structure(key, lex), classify.classify_function(key, lex))
        for key in kept
    ]
    with open(cfg.out / "classifications.tsv", "w", encoding="utf-8") as f:
        classify.write_classification_tsv(rows, f)
    hist = classify.category_histogram(func for _, _, func in rows)
    summary: list[tuple[str, object]] = [("classified", hist.total)]
    summary += [(f"subcategory_{s}", c) for s, c in hist.by_subcategory.items()]
    summary += [(f"orientation_{o}", c) for o, c in hist.by_orientation.items()]
    _emit(cfg, summary)
    return EXIT_OK


def cmd_report(cfg: RunConfig) -> int:
    corpus = _load(cfg)
    table = _get_table(cfg, corpus)
    kept = _read_kept(cfg)
    dist = counting.size_distribution(table, kept)
    coverage_all = counting.coverage_stat(table, kept, corpus)
    top5: list[NgramKey] = []
    kept_set = set(kept)
    for n in range(cfg.nmin, cfg.nmax + 1):
        tier = sorted(
            (k for k in kept_set if len(k) == n),
            key=lambda k: (-table.counts[k], k),
        )
        top5.extend(tier[:5])
    coverage_top5 = counting.coverage_stat(table, top5, corpus)

    report = {
        "size_distribution": {str(n): c for n, c in dist.items()},
        "kept_total": len(kept),
        "coverage_all_kept_pct": f"{100 * coverage_all:.2f}",
        "coverage_top5_per_length_pct": f"{100 * coverage_top5:.2f}",
        "top_k": {},
    }
    for n in range(cfg.nmin, cfg.nmax + 1):
        rows = counting.top_k(table, cfg.top_k, length_filter=n)
        report["top_k"][str(n)] = [
            {"ngram": " ".join(k), "raw_freq": s.raw_freq} for k, s in rows
        ]

    cfg.out.mkdir(parents=True, exist_ok=True)
    if cfg.format == "json":
        text = json.dumps(report, indent=2, sort_keys=True) + "\n"
        out_path = cfg.out / "report.json"
    else:
        lines = ["# size distribution", "n\tbundle_types"]
        for n, c in dist.items():
            lines.append(f"{n}\t{c}")
        lines.append(f"total\t{len(kept)}")
        lines.append("")
        lines.append("# coverage")
        lines.append(f"all_kept_pct\t{100 * coverage_all:.2f}")
        lines.append(f"top5_per_length_pct\t{100 * coverage_top5:.2f}")
        lines.append("")
        lines.append(f"# top {cfg.top_k} per length")
        lines.append("n\tngram\traw_freq")
        for n in range(cfg.nmin, cfg.nmax + 1):
            for k, s in counting.top_k(table, cfg.top_k, length_filter=n):
                lines.append(f"{n}\t{' '.join(k)}\t{s.raw_freq}")
        text = "\n".join(lines) + "\n"
        out_path = cfg.out / "report.tsv"
    out_path.write_text(text, encoding="utf-8")
    if cfg.format == "pretty":
        print(text, end="")
    else:
        _emit(cfg, [("report", str(out_path))] + [
            (f"size_{n}", c) for n, c in dist.items()
        ])
    return EXIT_OK


def cmd_stats(cfg: RunConfig) -> int:
    corpus = _load(cfg)
    by_kind: dict[str, int] = {}
    for doc in corpus.documents:
        by_kind[doc.source_kind] = by_kind.get(doc.source_kind, 0) + len(doc)
    lines: list[tuple[str, object]] = [
        ("documents", len(corpus)),
        ("total_tokens", corpus.total_tokens),
    ]
    lines += [(f"tokens_{kind}", n) for kind, n in sorted(by_kind.items())]
    _emit(cfg, lines)
    return EXIT_OK


COMMANDS = {
    "extract": cmd_extract,
    "filter": cmd_filter,
    "classify": cmd_classify,
    "report": cmd_report,
    "stats": cmd_stats,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
    except (ConfigError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return COMMANDS[args.command](cfg)
    except (ConfigError, LexiconError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (CorpusLoadError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
