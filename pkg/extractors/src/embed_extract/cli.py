"""CLI: translate a corpus, extract embedding feature files.

Exit codes: 0 success, 1 bad input/config, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from .corpus_io import read_articles, write_articles
from .encoders import GROUPS
from .errors import CorpusFormatError, ExtractError
from .jobs import ExtractionJob, run_extraction
from .translate import make_backend, translate_corpus


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="embed-extract",
        description="Produce translation and embedding feature files "
                    "(vector-JSONL + manifest) for a news corpus",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_tr = sub.add_parser("translate", help="fill title_en/body_en fields")
    p_tr.add_argument("--articles", required=True)
    p_tr.add_argument("--out", required=True, help="output articles.jsonl")
    p_tr.add_argument("--backend", choices=["service", "marker"], default="service",
                      help="'service' uses TRANSLATE_ENDPOINT/TRANSLATE_API_KEY")

    p_ex = sub.add_parser("extract", help="write one or all vector feature files")
    p_ex.add_argument("--articles", required=True)
    p_ex.add_argument("--group", required=True,
                      help=f"one of {sorted(GROUPS)} or 'all'")
    p_ex.add_argument("--out", required=True, help="output directory")
    p_ex.add_argument("--backend", choices=["auto", "hash", "transformers"],
                      default="auto")
    p_ex.add_argument("--model-dir",
                      help="local checkpoint directory for transformer groups")
    return parser


def cmd_translate(args) -> int:
    articles = read_articles(args.articles)
    backend = make_backend(args.backend)
    translated, errors = translate_corpus(articles, backend)
    write_articles(translated, args.out)
    done = sum(1 for a in translated
               if a.get("title_en") is not None and a.get("body_en") is not None)
    print(f"translated corpus written to {args.out} "
          f"({done}/{len(translated)} articles complete)")
    if errors:
        print(json.dumps({"translation_errors": errors}, indent=2, sort_keys=True),
              file=sys.stderr)
        return 2
    return 0


def cmd_extract(args) -> int:
    groups = sorted(GROUPS) if args.group == "all" else [args.group]
    for group in groups:
        job = ExtractionJob(
            corpus_path=args.articles, group=group, output_dir=args.out,
            backend=args.backend, model_dir=args.model_dir,
        )
        path = run_extraction(job)
        spec = job.spec()
        print(f"{group}: wrote {path} (dim {2 * spec.part_dim})")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "translate":
            return cmd_translate(args)
        return cmd_extract(args)
    except CorpusFormatError as err:
        print(json.dumps({"error": str(err)}), file=sys.stderr)
        return 1
    except ExtractError as err:
        print(json.dumps({"error": str(err)}), file=sys.stderr)
        return 2
    except OSError as err:
        print(json.dumps({"error": str(err)}), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
