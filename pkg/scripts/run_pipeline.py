#!/usr/bin/env python3
"""Run the full bundle pipeline (extract -> filter -> classify -> report).

Thin driver over the ``lexbundles`` CLI so a corpus directory can be
processed end-to-end with one command.

Usage:
    python3 scripts/run_pipeline.py CORPUS_DIR OUT_DIR [extra CLI flags...]

Any extra flags (e.g. ``--min-freq-pm 10 --min-mi 3.0``) are forwarded to
the extract and filter stages.
"""

import sys

from lexbundles.cli import main as cli_main


def main() -> int:
    if len(sys.argv) < 3:
        print(__doc__, file=sys.stderr)
        return 2
    corpus_dir, out_dir, *extra = sys.argv[1:]
    base = ["--input", corpus_dir, "--out", out_dir]
    for stage, flags in [
        ("extract", extra),
        ("filter", extra),
        ("classify", []),
        ("report", []),
    ]:
        code = cli_main([stage, *base, *flags])
        if code != 0:
            print(f"{stage} failed with exit code {code}", file=sys.stderr)
            return code
        print(f"{stage}: ok")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
