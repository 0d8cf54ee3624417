"""Nine-class news-toxicity classification pipeline."""

from .corpus import (
    LABELS,
    Article,
    Dataset,
    Label,
    Medium,
    label_distribution,
    load_dataset,
    save_dataset,
)
from .errors import (
    ConfigError,
    CorpusError,
    FeatureError,
    LeakError,
    ModelError,
    NewstoxError,
    PipelineError,
)
from .feature_store import (
    REGISTRY,
    FeatureGroup,
    FeatureMatrix,
    concat_groups,
    ingest_vectors,
    load_feature_file,
    standardize,
    write_vectors,
)
from .local_features import (
    MediaVector,
    StyloVector,
    TokenizedText,
    media_features,
    stylometric_features,
    tokenize,
)
from .lsa import LsaPart, SvdProjector, TfidfModel, fit_lsa_part, fit_svd, fit_tfidf
from .metrics import MetricsBundle, compute_metrics
from .models import (
    HyperGrid,
    MlpClassifier,
    SoftmaxClassifier,
    fit_mlp,
    fit_softmax,
    grid_search,
    predict,
    predict_proba,
)
from .pipeline import (
    ExperimentRunner,
    FeatureService,
    FoldPlan,
    LeakAudit,
    RunConfig,
    RunReport,
    SetupSpec,
    default_setups,
    emit_report,
    plan_folds,
    write_table3,
)
from .resample import ResamplePlan, random_oversample, smote

__version__ = "0.1.0"
