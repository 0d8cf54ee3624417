"""Command-line surface: validate, featurize, run.

Exit codes: 0 success, 1 validation/config error, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .corpus import LABELS, label_distribution, load_dataset
from .errors import ConfigError, CorpusError, FeatureError, ModelError, NewstoxError
from .feature_store import REGISTRY, load_feature_file, write_vectors
from .local_features import media_features, stylometric_features
from .models import HyperGrid
from .pipeline import (
    ExperimentRunner,
    FeatureService,
    RunConfig,
    emit_report,
    plan_folds,
    write_table3,
)
from .resample import ResamplePlan

PRODUCER = "newstox featurize"


def _parse_setups(text: str) -> tuple[int, ...]:
    if text.strip().lower() == "all":
        return tuple(range(1, 15))
    out = []
    try:
        for part in text.split(","):
            part = part.strip()
            if not part:
                continue
            if "-" in part:
                lo, hi = part.split("-", 1)
                out.extend(range(int(lo), int(hi) + 1))
            else:
                out.append(int(part))
    except ValueError:
        raise ConfigError(f"cannot parse setup selection {text!r}") from None
    if not out:
        raise ConfigError(f"no setups in {text!r}")
    return tuple(out)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="newstox",
        description="Nine-class news-toxicity classification pipeline",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_corpus_args(p):
        p.add_argument("--articles", required=True, help="articles.jsonl path")
        p.add_argument("--media", required=True, help="media.jsonl path")

    p_validate = sub.add_parser(
        "validate", help="check corpus and feature files for alignment and dimensions"
    )
    add_corpus_args(p_validate)
    p_validate.add_argument(
        "--features", nargs="*", default=[], metavar="MANIFEST",
        help="feature manifest files (*.manifest.json)",
    )

    p_feat = sub.add_parser(
        "featurize", help="write stylometric and media vector files for the corpus"
    )
    add_corpus_args(p_feat)
    p_feat.add_argument("--out", required=True, help="output directory")

    p_run = sub.add_parser("run", help="execute experimental setups and emit reports")
    add_corpus_args(p_run)
    p_run.add_argument(
        "--features", nargs="*", default=[], metavar="MANIFEST",
        help="feature manifest files (*.manifest.json)",
    )
    p_run.add_argument("--out", required=True, help="output directory")
    p_run.add_argument("--seed", type=int, default=42)
    p_run.add_argument("--setups", default="all", help='e.g. "all", "1", "2-5,7,14"')
    p_run.add_argument("--resample", choices=["none", "random", "smote"], default="none")
    p_run.add_argument("--classifier", choices=["softmax", "mlp"], default="softmax")
    p_run.add_argument("--config", help="run-configuration JSON (flags override it)")
    p_run.add_argument("--grid", help="comma-separated l2 strengths")
    p_run.add_argument("--max-iter", type=int, help="optimizer iteration cap")
    p_run.add_argument("--lr", type=float, help="optimizer learning rate")
    p_run.add_argument("--outer-folds", type=int)
    p_run.add_argument("--inner-folds", type=int)
    return parser


def _load_features(manifest_paths):
    matrices = {}
    for manifest in manifest_paths:
        matrix = load_feature_file(manifest)
        name = matrix.group.name
        if name in matrices:
            raise FeatureError(f"feature group {name!r} supplied twice")
        matrices[name] = matrix
    return matrices


def cmd_validate(args) -> int:
    dataset = load_dataset(args.articles, args.media)
    dist = label_distribution(dataset)
    print(f"corpus: {len(dataset.articles)} articles, {len(dataset.media)} media")
    print("label distribution: " + ", ".join(f"{l}={dist[l]}" for l in LABELS))

    errors = []
    matrices = {}
    for manifest in args.features:
        try:
            matrix = load_feature_file(manifest)
        except (FeatureError, OSError, json.JSONDecodeError) as err:
            errors.append({"manifest": str(manifest), "error": str(err)})
            continue
        matrices[matrix.group.name] = matrix

    corpus_ids = set(dataset.ids)
    print(f"{'group':<10} {'dim':>6} {'rows':>6} coverage")
    for name, matrix in sorted(matrices.items()):
        missing = sorted(corpus_ids - set(matrix.ids))
        extra = sorted(set(matrix.ids) - corpus_ids)
        status = "ok"
        if missing:
            status = f"missing {len(missing)} ids"
            errors.append({"group": name, "missing_ids": missing})
        if extra:
            status += f" +{len(extra)} unknown ids"
            errors.append({"group": name, "unknown_ids": extra})
        print(f"{name:<10} {matrix.dim:>6} {len(matrix.ids):>6} {status}")

    if errors:
        print(json.dumps({"errors": errors}, indent=2, sort_keys=True))
        return 1
    return 0


def cmd_featurize(args) -> int:
    dataset = load_dataset(args.articles, args.media)
    out_dir = Path(args.out)
    ids = dataset.ids
    stylo_rows = [stylometric_features(a.title, a.body).as_array()
                  for a in dataset.articles]
    write_vectors(out_dir, "stylo", ids, stylo_rows, PRODUCER)
    media_rows = [media_features(dataset.media[a.medium_id]).as_array()
                  for a in dataset.articles]
    write_vectors(out_dir, "media", ids, media_rows, PRODUCER)
    print(f"wrote stylo (dim {REGISTRY['stylo'].expected_dim}) and media "
          f"(dim {REGISTRY['media'].expected_dim}) vectors for {len(ids)} articles "
          f"to {out_dir}")
    return 0


def _run_config_from_args(args) -> RunConfig:
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            config = RunConfig.from_json_dict(json.load(fh))
    else:
        config = RunConfig()
    grid = config.grid
    if args.grid:
        try:
            grid = HyperGrid(
                l2_values=tuple(float(v) for v in args.grid.split(",")),
                max_iterations=grid.max_iterations,
                tolerance=grid.tolerance,
            )
        except (ValueError, ModelError) as err:
            raise ConfigError(f"bad --grid {args.grid!r}: {err}") from None
    if args.max_iter:
        grid = HyperGrid(grid.l2_values, args.max_iter, grid.tolerance)
    return RunConfig(
        seed=args.seed,
        setups=_parse_setups(args.setups),
        grid=grid,
        lr=args.lr if args.lr else config.lr,
        outer_folds=args.outer_folds or config.outer_folds,
        inner_folds=args.inner_folds or config.inner_folds,
        title_dim=config.title_dim,
        body_dim=config.body_dim,
        classifier=args.classifier,
        resample=ResamplePlan(strategy=args.resample),
        mlp_epochs=config.mlp_epochs,
        mlp_lr=config.mlp_lr,
        mlp_dropout=config.mlp_dropout,
    )


def cmd_run(args) -> int:
    dataset = load_dataset(args.articles, args.media)
    matrices = _load_features(args.features)
    config = _run_config_from_args(args)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "run_config.json", "w", encoding="utf-8") as fh:
        snapshot = config.to_json_dict()
        snapshot["articles_path"] = str(args.articles)
        snapshot["media_path"] = str(args.media)
        snapshot["feature_manifests"] = [str(p) for p in args.features]
        json.dump(snapshot, fh, indent=2, sort_keys=True)
        fh.write("\n")

    plan = plan_folds(dataset, config.outer_folds, config.inner_folds, config.seed)
    features = FeatureService(dataset, matrices, config)
    runner = ExperimentRunner(dataset, plan, features, config)
    reports = runner.run_all()

    audit_summary = runner.audit.verify()
    with open(out_dir / "audit.json", "w", encoding="utf-8") as fh:
        json.dump(audit_summary, fh, indent=2, sort_keys=True)
        fh.write("\n")

    for setup_id, report in sorted(reports.items()):
        emit_report(report, out_dir / f"setup_{setup_id:02d}")
        print(report.summary_line())
    write_table3(list(reports.values()), out_dir / "table3.csv")
    print(f"reports in {out_dir}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "validate":
            return cmd_validate(args)
        if args.command == "featurize":
            return cmd_featurize(args)
        return cmd_run(args)
    except (CorpusError, FeatureError, ConfigError) as err:
        print(json.dumps({"error": str(err)}), file=sys.stderr)
        return 1
    except NewstoxError as err:
        print(json.dumps({"error": str(err)}), file=sys.stderr)
        return 2
    except OSError as err:
        print(json.dumps({"error": str(err)}), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
