"""Orchestration of the 14 experimental setups: fold planning, per-setup nested
cross-validation, the stacked meta-classifier over out-of-fold posteriors,
metrics and report files."""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .corpus import LABELS, Dataset, Label
from .errors import ConfigError, LeakError, PipelineError
from .feature_store import (
    REGISTRY,
    FeatureMatrix,
    apply_standardize,
    column_stats,
)
from .local_features import media_features, stylometric_features, tokenize
from .lsa import BODY_DIM, TITLE_DIM, LsaPart, fit_lsa_part, lsa_features
from .metrics import MetricsBundle, compute_metrics
from .models import (
    DEFAULT_L2_GRID,
    HyperGrid,
    fit_mlp,
    fit_softmax,
    grid_search,
    predict_proba,
)
from .resample import ResamplePlan, apply_plan
from .splits import stratified_partition

N_CLASSES = len(LABELS)
META_BASE_IDS = (2, 3, 4, 5, 7, 8, 9, 10, 12)


def derive_seed(*parts: int) -> int:
    """Stable sub-seed from (seed, setup, fold, phase) keys, independent of
    scheduling order."""
    return int(np.random.SeedSequence(list(parts)).generate_state(1)[0])


# ---------------------------------------------------------------------------
# fold planning
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FoldPlan:
    outer: tuple[tuple[str, ...], ...]  # test ids per outer fold
    inner: tuple[tuple[tuple[str, ...], ...], ...]  # per fold: partition of training ids
    seed: int

    @property
    def n_outer(self) -> int:
        return len(self.outer)

    def training_ids(self, fold: int) -> tuple[str, ...]:
        return tuple(i for f, ids in enumerate(self.outer) if f != fold for i in ids)


def plan_folds(dataset: Dataset, outer: int = 5, inner: int = 5, seed: int = 42) -> FoldPlan:
    """Deterministic stratified outer/inner assignments keyed by primary_label."""
    ids = dataset.ids
    labels = [a.primary_label for a in dataset.articles]
    if len(ids) < outer:
        raise ConfigError(f"{len(ids)} articles cannot fill {outer} outer folds")
    rng = np.random.default_rng(seed)
    outer_idx = stratified_partition(labels, outer, rng)
    outer_ids = tuple(tuple(ids[i] for i in fold) for fold in outer_idx)

    inner_ids = []
    for f in range(outer):
        train = [i for g, fold in enumerate(outer_idx) if g != f for i in fold]
        train_labels = [labels[i] for i in train]
        rng_f = np.random.default_rng(derive_seed(seed, f, 0, 1))
        parts = stratified_partition(train_labels, inner, rng_f, warn_small=(f == 0))
        inner_ids.append(tuple(tuple(ids[train[j]] for j in part) for part in parts))
    return FoldPlan(outer=outer_ids, inner=tuple(inner_ids), seed=seed)


# ---------------------------------------------------------------------------
# setups and run configuration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SetupSpec:
    id: int
    name: str
    groups: tuple[str, ...]
    classifier: str = "softmax"  # baseline | softmax | mlp | meta
    resample: ResamplePlan = ResamplePlan()


def default_setups(classifier: str = "softmax",
                   resample: ResamplePlan = ResamplePlan()) -> dict[int, SetupSpec]:
    """The standard table of 14 setups. `classifier` swaps softmax for the MLP
    in setups 2-13; baseline and meta are fixed."""
    clf = classifier
    table = {
        1: SetupSpec(1, "Baseline", (), "baseline"),
        2: SetupSpec(2, "BERT (bg)", ("bert_bg",), clf, resample),
        3: SetupSpec(3, "XLM (bg)", ("xlm_bg",), clf, resample),
        4: SetupSpec(4, "Stylometry", ("stylo",), clf, resample),
        5: SetupSpec(5, "LSA", ("lsa_bg",), clf, resample),
        6: SetupSpec(6, "Bulgarian combined",
                     ("bert_bg", "xlm_bg", "stylo", "lsa_bg"), clf, resample),
        7: SetupSpec(7, "USE (en)", ("use_en",), clf, resample),
        8: SetupSpec(8, "NELA (en)", ("nela_en",), clf, resample),
        9: SetupSpec(9, "BERT (en)", ("bert_en",), clf, resample),
        10: SetupSpec(10, "ElMo (en)", ("elmo_en",), clf, resample),
        11: SetupSpec(11, "English combined",
                      ("use_en", "nela_en", "bert_en", "elmo_en"), clf, resample),
        12: SetupSpec(12, "Media meta", ("media",), clf, resample),
        13: SetupSpec(13, "All combined",
                      ("bert_bg", "xlm_bg", "stylo", "lsa_bg",
                       "use_en", "nela_en", "bert_en", "elmo_en", "media"),
                      clf, resample),
        14: SetupSpec(14, "Meta classifier", (), "meta", resample),
    }
    return table


@dataclass(frozen=True)
class RunConfig:
    seed: int = 42
    setups: tuple[int, ...] = tuple(range(1, 15))
    grid: HyperGrid = HyperGrid()
    lr: float = 0.01
    outer_folds: int = 5
    inner_folds: int = 5
    title_dim: int = TITLE_DIM
    body_dim: int = BODY_DIM
    classifier: str = "softmax"
    resample: ResamplePlan = ResamplePlan()
    mlp_epochs: int = 200
    mlp_lr: float = 1e-3
    mlp_dropout: float = 0.35

    def __post_init__(self):
        if self.seed < 0:
            raise ConfigError("seed must be non-negative")
        if self.classifier not in ("softmax", "mlp"):
            raise ConfigError(f"unknown classifier {self.classifier!r}")
        bad = [s for s in self.setups if not 1 <= s <= 14]
        if bad:
            raise ConfigError(f"unknown setup ids {bad}; valid ids are 1-14")

    def to_json_dict(self) -> dict:
        return {
            "seed": self.seed,
            "setups": list(self.setups),
            "l2_grid": list(self.grid.l2_values),
            "max_iterations": self.grid.max_iterations,
            "tolerance": self.grid.tolerance,
            "learning_rate": self.lr,
            "outer_folds": self.outer_folds,
            "inner_folds": self.inner_folds,
            "lsa_title_dim": self.title_dim,
            "lsa_body_dim": self.body_dim,
            "classifier": self.classifier,
            "resample": {
                "strategy": self.resample.strategy,
                "k_neighbors": self.resample.k_neighbors,
            },
            "mlp": {
                "epochs": self.mlp_epochs,
                "learning_rate": self.mlp_lr,
                "dropout_rate": self.mlp_dropout,
            },
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "RunConfig":
        mlp = obj.get("mlp", {})
        resample = obj.get("resample", {})
        return cls(
            seed=int(obj.get("seed", 42)),
            setups=tuple(obj.get("setups", range(1, 15))),
            grid=HyperGrid(
                l2_values=tuple(obj.get("l2_grid", DEFAULT_L2_GRID)),
                max_iterations=int(obj.get("max_iterations", 2000)),
                tolerance=float(obj.get("tolerance", 1e-6)),
            ),
            lr=float(obj.get("learning_rate", 0.01)),
            outer_folds=int(obj.get("outer_folds", 5)),
            inner_folds=int(obj.get("inner_folds", 5)),
            title_dim=int(obj.get("lsa_title_dim", TITLE_DIM)),
            body_dim=int(obj.get("lsa_body_dim", BODY_DIM)),
            classifier=obj.get("classifier", "softmax"),
            resample=ResamplePlan(
                strategy=resample.get("strategy", "none"),
                k_neighbors=int(resample.get("k_neighbors", 5)),
            ),
            mlp_epochs=int(mlp.get("epochs", 200)),
            mlp_lr=float(mlp.get("learning_rate", 1e-3)),
            mlp_dropout=float(mlp.get("dropout_rate", 0.35)),
        )


# ---------------------------------------------------------------------------
# leak audit
# ---------------------------------------------------------------------------

class LeakAudit:
    """Bookkeeping proving that every prediction used for metrics or
    meta-features came from a model that never trained on the target article."""

    def __init__(self):
        self._models: list[frozenset[str]] = []
        self._records: list[tuple[int, str, str]] = []  # (model_key, article_id, purpose)

    def register_model(self, train_ids) -> int:
        self._models.append(frozenset(train_ids))
        return len(self._models) - 1

    def record(self, model_key: int, article_ids, purpose: str) -> None:
        for article_id in article_ids:
            self._records.append((model_key, article_id, purpose))

    @property
    def n_models(self) -> int:
        return len(self._models)

    @property
    def n_records(self) -> int:
        return len(self._records)

    def iter_records(self):
        for model_key, article_id, purpose in self._records:
            yield self._models[model_key], article_id, purpose

    def verify(self) -> dict:
        violations = [
            (article_id, purpose)
            for train_ids, article_id, purpose in self.iter_records()
            if article_id in train_ids
        ]
        if violations:
            raise LeakError(
                f"{len(violations)} prediction(s) produced by models trained on "
                f"the target article, e.g. {violations[:5]}"
            )
        purposes: dict[str, int] = {}
        for _, _, purpose in self._records:
            purposes[purpose] = purposes.get(purpose, 0) + 1
        return {
            "models": self.n_models,
            "records": self.n_records,
            "purposes": dict(sorted(purposes.items())),
            "verified": True,
        }


# ---------------------------------------------------------------------------
# feature assembly (fold-local LSA, native groups, ingested groups)
# ---------------------------------------------------------------------------

class FeatureService:
    """Builds raw per-fold design matrices. Stylometric/media features are
    fold-independent; LSA is refit on each requested training-id set (cached);
    everything else comes from ingested matrices."""

    def __init__(self, dataset: Dataset, external: dict[str, FeatureMatrix],
                 config: RunConfig):
        self.dataset = dataset
        self.external = external
        self.config = config
        self._docs = {
            a.id: (tokenize(a.title), tokenize(a.body)) for a in dataset.articles
        }
        self._native: dict[str, FeatureMatrix] = {}
        self._lsa_cache: dict[tuple[str, ...], tuple[LsaPart, LsaPart]] = {}

    def group_available(self, name: str) -> bool:
        return name in ("stylo", "media", "lsa_bg") or name in self.external

    def check_groups(self, groups, setup_id: int) -> None:
        corpus_ids = set(self.dataset.ids)
        for name in groups:
            if not self.group_available(name):
                hint = (
                    " (English-translation groups are ingested; provide its "
                    "vector manifest)" if name.endswith("_en") else ""
                )
                raise PipelineError(
                    f"setup {setup_id}: feature group {name!r} is not available{hint}"
                )
            if name in self.external:
                missing = corpus_ids - set(self.external[name].ids)
                if missing:
                    raise PipelineError(
                        f"setup {setup_id}: group {name!r} lacks vectors for "
                        f"{sorted(missing)[:10]}"
                    )

    def nominal_dim(self, name: str) -> int:
        if name in self.external:
            return self.external[name].dim
        if name in REGISTRY:
            return REGISTRY[name].expected_dim
        raise PipelineError(f"unknown feature group {name!r}")

    def _native_matrix(self, name: str) -> FeatureMatrix:
        if name not in self._native:
            if name == "stylo":
                rows = np.vstack(
                    [stylometric_features(a.title, a.body).as_array()
                     for a in self.dataset.articles]
                )
                group = REGISTRY["stylo"]
            else:
                rows = np.vstack(
                    [media_features(self.dataset.media[a.medium_id]).as_array()
                     for a in self.dataset.articles]
                )
                group = REGISTRY["media"]
            self._native[name] = FeatureMatrix(
                group=group, ids=self.dataset.ids, rows=rows
            )
        return self._native[name]

    def _lsa_parts(self, fit_ids: tuple[str, ...]) -> tuple[LsaPart, LsaPart]:
        key = tuple(fit_ids)
        if key not in self._lsa_cache:
            title_docs = [self._docs[i][0] for i in fit_ids]
            body_docs = [self._docs[i][1] for i in fit_ids]
            seed = derive_seed(self.config.seed, len(fit_ids), 0, 2)
            self._lsa_cache[key] = (
                fit_lsa_part(title_docs, self.config.title_dim, seed=seed),
                fit_lsa_part(body_docs, self.config.body_dim, seed=seed),
            )
        return self._lsa_cache[key]

    def _group_block(self, name: str, fit_ids, id_set, lsa_parts) -> np.ndarray:
        if name == "lsa_bg":
            title_model, body_model = lsa_parts
            return np.vstack(
                [lsa_features(self._docs[i][0], self._docs[i][1],
                              title_model, body_model) for i in id_set]
            )
        if name in ("stylo", "media"):
            return self._native_matrix(name).rows_for(id_set)
        if name in self.external:
            return self.external[name].rows_for(id_set)
        raise PipelineError(f"feature group {name!r} is not available")

    def matrices_for(self, groups, fit_ids, eval_id_sets):
        """Raw design matrices for the fit ids and each eval id set, with all
        fold-local transforms (LSA) fit on fit_ids only."""
        fit_ids = tuple(fit_ids)
        lsa_parts = self._lsa_parts(fit_ids) if "lsa_bg" in groups else None
        all_sets = [fit_ids] + [tuple(s) for s in eval_id_sets]
        stacked = []
        for id_set in all_sets:
            blocks = [self._group_block(g, fit_ids, id_set, lsa_parts) for g in groups]
            stacked.append(blocks[0] if len(blocks) == 1 else np.hstack(blocks))
        return stacked[0], stacked[1:]


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

@dataclass
class RunReport:
    setup_id: int
    name: str
    dimension: int | None
    metrics: MetricsBundle
    fold_metrics: list[dict]
    config: dict

    @property
    def accuracy_pct(self) -> float:
        return 100.0 * self.metrics.accuracy

    @property
    def macro_f1_pct(self) -> float:
        return 100.0 * self.metrics.macro_f1

    def to_json_dict(self) -> dict:
        return {
            "setup": self.setup_id,
            "name": self.name,
            "dimension": self.dimension,
            "accuracy": round(self.accuracy_pct, 4),
            "macro_f1": round(self.macro_f1_pct, 4),
            "metrics": self.metrics.to_json_dict(),
            "folds": self.fold_metrics,
            "config": self.config,
        }

    def summary_line(self) -> str:
        dim = "-" if self.dimension is None else str(self.dimension)
        return (
            f"{self.setup_id:>2}  {self.name:<20} dim={dim:>5}  "
            f"acc={self.accuracy_pct:6.2f}  f1_macro={self.macro_f1_pct:6.2f}"
        )


def emit_report(report: RunReport, out_dir) -> list[Path]:
    """Write report.json, confusion.csv and summary.txt; byte-stable re-runs."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []

    json_path = out_dir / "report.json"
    with open(json_path, "w", encoding="utf-8") as fh:
        json.dump(report.to_json_dict(), fh, indent=2, sort_keys=True, ensure_ascii=False)
        fh.write("\n")
    paths.append(json_path)

    labels = [str(l) for l in report.metrics.label_space]
    csv_path = out_dir / "confusion.csv"
    with open(csv_path, "w", encoding="utf-8") as fh:
        fh.write("true\\predicted," + ",".join(labels) + "\n")
        for label, row in zip(labels, report.metrics.confusion):
            fh.write(label + "," + ",".join(str(int(v)) for v in row) + "\n")
    paths.append(csv_path)

    txt_path = out_dir / "summary.txt"
    with open(txt_path, "w", encoding="utf-8") as fh:
        fh.write(report.summary_line() + "\n")
    paths.append(txt_path)
    return paths


def write_table3(reports, path) -> Path:
    """Combined CSV mirroring the per-setup summary columns."""
    path = Path(path)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("setup,feature_set,dimension,accuracy,f1_macro\n")
        for r in sorted(reports, key=lambda r: r.setup_id):
            dim = "" if r.dimension is None else str(r.dimension)
            fh.write(
                f"{r.setup_id},{r.name},{dim},{r.accuracy_pct:.2f},{r.macro_f1_pct:.2f}\n"
            )
    return path


# ---------------------------------------------------------------------------
# experiment runner
# ---------------------------------------------------------------------------

@dataclass
class _BaseFoldFit:
    chosen_l2: float | None
    test_posteriors: np.ndarray  # rows follow plan.outer[fold] order
    actual_dim: int
    model_key: int


class ExperimentRunner:
    """Runs setups against one dataset/plan/feature bundle, sharing per-fold
    base-model fits between the single-model setups and the meta-classifier."""

    def __init__(self, dataset: Dataset, plan: FoldPlan, features: FeatureService,
                 config: RunConfig, audit: LeakAudit | None = None):
        self.dataset = dataset
        self.plan = plan
        self.features = features
        self.config = config
        self.audit = audit if audit is not None else LeakAudit()
        self.label_index = {label: i for i, label in enumerate(LABELS)}
        self.y_by_id = {
            a.id: self.label_index[a.primary_label] for a in dataset.articles
        }
        self.setups = default_setups(config.classifier, config.resample)
        self._base_fits: dict[tuple[int, int], _BaseFoldFit] = {}

    # -- helpers ------------------------------------------------------------

    def _labels_for(self, ids) -> np.ndarray:
        return np.array([self.y_by_id[i] for i in ids], dtype=int)

    def _inner_fold_indices(self, fold: int, train_ids) -> list[list[int]]:
        pos = {article_id: i for i, article_id in enumerate(train_ids)}
        return [[pos[i] for i in part] for part in self.plan.inner[fold]]

    def _resample_fn(self, spec: SetupSpec, fold: int, phase: int):
        if spec.resample.strategy == "none":
            return None
        seed = derive_seed(self.config.seed, spec.id, fold, phase)
        plan = replace(spec.resample, seed=seed)
        return lambda X, y: apply_plan(X, y, plan)

    def _train_eval(self, spec: SetupSpec, fold: int, fit_ids, eval_id_sets,
                    grid_folds=None, l2=None, phase: int = 10):
        """Fit-fold features, standardize, drop zero-variance train columns,
        grid-search l2 (softmax) unless given, fit and return posteriors."""
        cfg = self.config
        X_raw, evals_raw = self.features.matrices_for(spec.groups, fit_ids, eval_id_sets)
        mean, std = column_stats(X_raw)
        mask = std > 0
        X = apply_standardize(X_raw, mean, std)[:, mask]
        evals = [apply_standardize(e, mean, std)[:, mask] for e in evals_raw]
        y = self._labels_for(fit_ids)
        resample_fn = self._resample_fn(spec, fold, phase)

        if spec.classifier == "mlp":
            if resample_fn is not None:
                X, y = resample_fn(X, y)
            model = fit_mlp(
                X, y,
                epochs=cfg.mlp_epochs,
                learning_rate=cfg.mlp_lr,
                dropout_rate=cfg.mlp_dropout,
                seed=derive_seed(cfg.seed, spec.id, fold, phase + 1),
                n_classes=N_CLASSES,
            )
            chosen = None
        else:
            if l2 is None:
                chosen = grid_search(
                    X, y, grid=cfg.grid.l2_values, folds=grid_folds,
                    seed=derive_seed(cfg.seed, spec.id, fold, phase + 2),
                    resample_fn=resample_fn, n_classes=N_CLASSES,
                    lr=cfg.lr, max_iter=cfg.grid.max_iterations,
                    tol=cfg.grid.tolerance,
                )
            else:
                chosen = l2
            if resample_fn is not None:
                X, y = resample_fn(X, y)
            model = fit_softmax(
                X, y, chosen, n_classes=N_CLASSES, lr=cfg.lr,
                max_iter=cfg.grid.max_iterations, tol=cfg.grid.tolerance,
            )
        model_key = self.audit.register_model(fit_ids)
        posteriors = [predict_proba(model, e) for e in evals]
        return model, model_key, posteriors, chosen, X_raw.shape[1]

    def _setup_config_snapshot(self, spec: SetupSpec) -> dict:
        snap = self.config.to_json_dict()
        snap["setup_groups"] = list(spec.groups)
        snap["setup_classifier"] = spec.classifier
        if spec.classifier == "meta":
            snap["meta_bases"] = list(META_BASE_IDS)
        return snap

    def _report(self, spec: SetupSpec, dimension, pooled_true, pooled_pred,
                fold_rows) -> RunReport:
        metrics = compute_metrics(pooled_true, pooled_pred, LABELS)
        return RunReport(
            setup_id=spec.id,
            name=spec.name,
            dimension=dimension,
            metrics=metrics,
            fold_metrics=fold_rows,
            config=self._setup_config_snapshot(spec),
        )

    def _fold_row(self, fold: int, true_labels, pred_labels, chosen_l2, actual_dim) -> dict:
        fold_m = compute_metrics(true_labels, pred_labels, LABELS)
        return {
            "fold": fold,
            "test_size": len(true_labels),
            "accuracy": round(100.0 * fold_m.accuracy, 4),
            "macro_f1": round(100.0 * fold_m.macro_f1, 4),
            "chosen_l2": chosen_l2,
            "actual_dim": actual_dim,
        }

    # -- the three run flavors ----------------------------------------------

    def run_baseline(self) -> RunReport:
        spec = self.setups[1]
        pooled_true: list[Label] = []
        pooled_pred: list[Label] = []
        fold_rows = []
        for fold in range(self.plan.n_outer):
            train_ids = self.plan.training_ids(fold)
            test_ids = self.plan.outer[fold]
            counts = {label: 0 for label in LABELS}
            for i in train_ids:
                counts[LABELS[self.y_by_id[i]]] += 1
            majority = max(LABELS, key=lambda l: counts[l])  # ties: label order
            model_key = self.audit.register_model(train_ids)
            self.audit.record(model_key, test_ids, "metric")
            true = [LABELS[self.y_by_id[i]] for i in test_ids]
            pred = [majority] * len(test_ids)
            pooled_true.extend(true)
            pooled_pred.extend(pred)
            fold_rows.append(self._fold_row(fold, true, pred, None, None))
        return self._report(spec, None, pooled_true, pooled_pred, fold_rows)

    def _ensure_base_fold(self, spec: SetupSpec, fold: int) -> _BaseFoldFit:
        key = (spec.id, fold)
        if key in self._base_fits:
            return self._base_fits[key]
        train_ids = self.plan.training_ids(fold)
        test_ids = self.plan.outer[fold]
        grid_folds = self._inner_fold_indices(fold, train_ids)
        _, model_key, (test_post,), chosen, dim = self._train_eval(
            spec, fold, train_ids, [test_ids], grid_folds=grid_folds
        )
        self.audit.record(model_key, test_ids, "metric")
        fit = _BaseFoldFit(
            chosen_l2=chosen, test_posteriors=test_post, actual_dim=dim,
            model_key=model_key,
        )
        self._base_fits[key] = fit
        return fit

    def run_setup(self, setup_id: int) -> RunReport:
        spec = self.setups[setup_id]
        if spec.classifier == "baseline":
            return self.run_baseline()
        if spec.classifier == "meta":
            return self.run_meta()
        self.features.check_groups(spec.groups, spec.id)
        pooled_true: list[Label] = []
        pooled_pred: list[Label] = []
        fold_rows = []
        for fold in range(self.plan.n_outer):
            fit = self._ensure_base_fold(spec, fold)
            test_ids = self.plan.outer[fold]
            true = [LABELS[self.y_by_id[i]] for i in test_ids]
            pred = [LABELS[j] for j in fit.test_posteriors.argmax(axis=1)]
            pooled_true.extend(true)
            pooled_pred.extend(pred)
            fold_rows.append(
                self._fold_row(fold, true, pred, fit.chosen_l2, fit.actual_dim)
            )
        dimension = sum(self.features.nominal_dim(g) for g in spec.groups)
        return self._report(spec, dimension, pooled_true, pooled_pred, fold_rows)

    def run_meta(self) -> RunReport:
        spec = self.setups[14]
        bases = [self.setups[i] for i in META_BASE_IDS]
        for base in bases:
            self.features.check_groups(base.groups, base.id)
        width = N_CLASSES * len(bases)
        pooled_true: list[Label] = []
        pooled_pred: list[Label] = []
        fold_rows = []
        for fold in range(self.plan.n_outer):
            train_ids = self.plan.training_ids(fold)
            test_ids = self.plan.outer[fold]
            base_fits = [self._ensure_base_fold(b, fold) for b in bases]

            # out-of-fold posteriors for every outer-training article: the
            # model serving inner fold g trains on the other inner folds only
            pos = {article_id: i for i, article_id in enumerate(train_ids)}
            meta_train = np.zeros((len(train_ids), width))
            for g, held_ids in enumerate(self.plan.inner[fold]):
                held = set(held_ids)
                sub_ids = tuple(i for i in train_ids if i not in held)
                for b, (base, fit) in enumerate(zip(bases, base_fits)):
                    _, model_key, (oof_post,), _, _ = self._train_eval(
                        base, fold, sub_ids, [held_ids],
                        l2=fit.chosen_l2, phase=20 + g,
                    )
                    self.audit.record(model_key, held_ids, "meta-feature")
                    cols = slice(b * N_CLASSES, (b + 1) * N_CLASSES)
                    for row, article_id in zip(oof_post, held_ids):
                        meta_train[pos[article_id], cols] = row

            meta_test = np.hstack([fit.test_posteriors for fit in base_fits])
            for fit in base_fits:  # those posteriors now also serve as meta inputs
                self.audit.record(fit.model_key, test_ids, "meta-feature")
            y_train = self._labels_for(train_ids)
            grid_folds = self._inner_fold_indices(fold, train_ids)
            mean, std = column_stats(meta_train)
            mask = std > 0
            X = apply_standardize(meta_train, mean, std)[:, mask]
            X_test = apply_standardize(meta_test, mean, std)[:, mask]
            resample_fn = self._resample_fn(spec, fold, 40)
            cfg = self.config
            chosen = grid_search(
                X, y_train, grid=cfg.grid.l2_values, folds=grid_folds,
                resample_fn=resample_fn, n_classes=N_CLASSES, lr=cfg.lr,
                max_iter=cfg.grid.max_iterations, tol=cfg.grid.tolerance,
            )
            if resample_fn is not None:
                X_fit, y_fit = resample_fn(X, y_train)
            else:
                X_fit, y_fit = X, y_train
            meta_model = fit_softmax(
                X_fit, y_fit, chosen, n_classes=N_CLASSES, lr=cfg.lr,
                max_iter=cfg.grid.max_iterations, tol=cfg.grid.tolerance,
            )
            model_key = self.audit.register_model(train_ids)
            self.audit.record(model_key, test_ids, "metric")
            posteriors = predict_proba(meta_model, X_test)

            true = [LABELS[self.y_by_id[i]] for i in test_ids]
            pred = [LABELS[j] for j in posteriors.argmax(axis=1)]
            pooled_true.extend(true)
            pooled_pred.extend(pred)
            fold_rows.append(self._fold_row(fold, true, pred, chosen, width))
        return self._report(spec, width, pooled_true, pooled_pred, fold_rows)

    def run_all(self, setup_ids=None) -> dict[int, RunReport]:
        """Run the requested setups (meta pulls its bases in automatically)."""
        wanted = list(setup_ids if setup_ids is not None else self.config.setups)
        ordered = []
        if 14 in wanted:
            for base_id in META_BASE_IDS:
                if base_id not in wanted:
                    ordered.append(base_id)
        ordered.extend(wanted)
        ordered = sorted(set(ordered))
        reports = {}
        for setup_id in ordered:
            try:
                reports[setup_id] = self.run_setup(setup_id)
            except PipelineError:
                raise
            except Exception as err:  # attach setup context
                raise PipelineError(f"setup {setup_id} failed: {err}") from err
        return reports
