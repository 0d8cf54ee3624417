"""Multinomial logistic regression and the ablation feed-forward net, trained
with full-batch Adam, plus the l2 grid search used by the nested CV."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import ModelError
from .splits import plain_partition, stratified_partition, train_val_splits

DEFAULT_L2_GRID = (1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0)
DEFAULT_LR = 0.01
DEFAULT_MAX_ITER = 2000
DEFAULT_TOL = 1e-6
ADAM_BETAS = (0.9, 0.999)
ADAM_EPS = 1e-8


@dataclass(frozen=True)
class HyperGrid:
    l2_values: tuple[float, ...] = DEFAULT_L2_GRID
    max_iterations: int = DEFAULT_MAX_ITER
    tolerance: float = DEFAULT_TOL

    def __post_init__(self):
        if not self.l2_values:
            raise ModelError("hyperparameter grid must be non-empty")
        if any(v <= 0 for v in self.l2_values):
            raise ModelError("l2 strengths must be positive")


def softmax(logits: np.ndarray) -> np.ndarray:
    z = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def one_hot(y: np.ndarray, n_classes: int) -> np.ndarray:
    out = np.zeros((len(y), n_classes))
    out[np.arange(len(y)), y] = 1.0
    return out


class _Adam:
    """Full-batch Adam over a list of parameter arrays."""

    def __init__(self, params: list[np.ndarray], lr: float):
        self.params = params
        self.lr = lr
        self.m = [np.zeros_like(p) for p in params]
        self.v = [np.zeros_like(p) for p in params]
        self.t = 0

    def step(self, grads: list[np.ndarray]) -> None:
        b1, b2 = ADAM_BETAS
        self.t += 1
        for p, g, m, v in zip(self.params, grads, self.m, self.v):
            m *= b1
            m += (1 - b1) * g
            v *= b2
            v += (1 - b2) * g * g
            m_hat = m / (1 - b1**self.t)
            v_hat = v / (1 - b2**self.t)
            p -= self.lr * m_hat / (np.sqrt(v_hat) + ADAM_EPS)


def _check_training_inputs(X: np.ndarray, y: np.ndarray) -> None:
    if X.ndim != 2 or len(X) != len(y):
        raise ModelError(f"bad training shapes X{X.shape} y{y.shape}")
    if len(X) < 2:
        raise ModelError("need at least 2 training samples")
    if not np.all(np.isfinite(X)):
        raise ModelError("training matrix contains non-finite values")
    if len(np.unique(y)) < 2:
        raise ModelError("training labels contain a single class")


# ---------------------------------------------------------------------------
# softmax regression
# ---------------------------------------------------------------------------

@dataclass
class SoftmaxClassifier:
    weights: np.ndarray  # (K, d)
    bias: np.ndarray  # (K,)
    l2_lambda: float

    @property
    def n_classes(self) -> int:
        return self.weights.shape[0]

    def to_json_dict(self) -> dict:
        return {
            "version": 1,
            "kind": "softmax",
            "weights": self.weights.tolist(),
            "bias": self.bias.tolist(),
            "l2_lambda": self.l2_lambda,
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "SoftmaxClassifier":
        if obj.get("version") != 1 or obj.get("kind") != "softmax":
            raise ModelError("unsupported softmax model dump")
        return cls(
            weights=np.asarray(obj["weights"], dtype=float),
            bias=np.asarray(obj["bias"], dtype=float),
            l2_lambda=float(obj["l2_lambda"]),
        )


def softmax_loss_and_grads(weights, bias, X, Y, l2_lambda):
    """Mean cross-entropy + (l2/2)*||W||^2 and its exact gradients."""
    n = len(X)
    logits = X @ weights.T + bias
    zmax = logits.max(axis=1, keepdims=True)
    log_norm = zmax[:, 0] + np.log(np.exp(logits - zmax).sum(axis=1))
    loss = (log_norm - (logits * Y).sum(axis=1)).mean()
    loss += 0.5 * l2_lambda * float((weights**2).sum())
    probs = softmax(logits)
    delta = (probs - Y) / n
    grad_w = delta.T @ X + l2_lambda * weights
    grad_b = delta.sum(axis=0)
    return loss, grad_w, grad_b


def fit_softmax(X, y, l2_lambda: float, seed: int = 0, n_classes: int | None = None,
                lr: float = DEFAULT_LR, max_iter: int = DEFAULT_MAX_ITER,
                tol: float = DEFAULT_TOL) -> SoftmaxClassifier:
    """Full-batch Adam from zero-initialized weights until the gradient
    sup-norm drops below tol or max_iter is hit. Deterministic given inputs."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=int)
    _check_training_inputs(X, y)
    k = n_classes if n_classes is not None else int(y.max()) + 1
    if y.max() >= k:
        raise ModelError(f"label {y.max()} out of range for {k} classes")
    del seed  # zero init + full-batch updates: nothing left to randomize
    Y = one_hot(y, k)
    weights = np.zeros((k, X.shape[1]))
    bias = np.zeros(k)
    opt = _Adam([weights, bias], lr=lr)
    for _ in range(max_iter):
        _, grad_w, grad_b = softmax_loss_and_grads(weights, bias, X, Y, l2_lambda)
        if max(np.abs(grad_w).max(), np.abs(grad_b).max()) < tol:
            break
        opt.step([grad_w, grad_b])
    return SoftmaxClassifier(weights=weights, bias=bias, l2_lambda=l2_lambda)


def predict_proba(model, X) -> np.ndarray:
    """Posterior probabilities; rows sum to 1."""
    X = np.asarray(X, dtype=float)
    if isinstance(model, MlpClassifier):
        return _mlp_forward(model, X)
    if X.shape[1] != model.weights.shape[1]:
        raise ModelError(
            f"input has {X.shape[1]} columns, model expects {model.weights.shape[1]}"
        )
    return softmax(X @ model.weights.T + model.bias)


def predict(model, X) -> np.ndarray:
    return predict_proba(model, X).argmax(axis=1)


# ---------------------------------------------------------------------------
# feed-forward network: d -> 64 ReLU -> 32 Tanh -> K softmax, dropout 0.35
# ---------------------------------------------------------------------------

MLP_HIDDEN1 = 64
MLP_HIDDEN2 = 32
MLP_DROPOUT = 0.35


@dataclass
class MlpClassifier:
    w1: np.ndarray  # (d, 64)
    b1: np.ndarray
    w2: np.ndarray  # (64, 32)
    b2: np.ndarray
    w3: np.ndarray  # (32, K)
    b3: np.ndarray
    dropout_rate: float = MLP_DROPOUT
    loss_history: list[float] = field(default_factory=list, repr=False)

    @property
    def n_classes(self) -> int:
        return self.w3.shape[1]

    @property
    def param_count(self) -> int:
        return sum(p.size for p in (self.w1, self.b1, self.w2, self.b2, self.w3, self.b3))

    def to_json_dict(self) -> dict:
        return {
            "version": 1,
            "kind": "mlp",
            "dropout_rate": self.dropout_rate,
            **{name: getattr(self, name).tolist()
               for name in ("w1", "b1", "w2", "b2", "w3", "b3")},
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "MlpClassifier":
        if obj.get("version") != 1 or obj.get("kind") != "mlp":
            raise ModelError("unsupported mlp model dump")
        arrays = {name: np.asarray(obj[name], dtype=float)
                  for name in ("w1", "b1", "w2", "b2", "w3", "b3")}
        return cls(dropout_rate=float(obj["dropout_rate"]), **arrays)


def _mlp_forward(model: MlpClassifier, X: np.ndarray) -> np.ndarray:
    # inference path: dropout off
    if X.shape[1] != model.w1.shape[0]:
        raise ModelError(
            f"input has {X.shape[1]} columns, model expects {model.w1.shape[0]}"
        )
    h1 = np.maximum(X @ model.w1 + model.b1, 0.0)
    h2 = np.tanh(h1 @ model.w2 + model.b2)
    return softmax(h2 @ model.w3 + model.b3)


def mlp_loss_and_grads(model: MlpClassifier, X, Y, masks=None):
    """Mean cross-entropy and gradients for all six parameter arrays.

    masks, when given, are the two inverted-dropout masks (already scaled by
    1/(1-p)) applied to the ReLU and Tanh layer outputs.
    """
    n = len(X)
    z1 = X @ model.w1 + model.b1
    a1 = np.maximum(z1, 0.0)
    d1 = a1 * masks[0] if masks is not None else a1
    z2 = d1 @ model.w2 + model.b2
    a2 = np.tanh(z2)
    d2 = a2 * masks[1] if masks is not None else a2
    z3 = d2 @ model.w3 + model.b3

    zmax = z3.max(axis=1, keepdims=True)
    log_norm = zmax[:, 0] + np.log(np.exp(z3 - zmax).sum(axis=1))
    loss = (log_norm - (z3 * Y).sum(axis=1)).mean()

    delta3 = (softmax(z3) - Y) / n
    grad_w3 = d2.T @ delta3
    grad_b3 = delta3.sum(axis=0)
    delta2 = delta3 @ model.w3.T
    if masks is not None:
        delta2 = delta2 * masks[1]
    delta2 = delta2 * (1.0 - a2**2)
    grad_w2 = d1.T @ delta2
    grad_b2 = delta2.sum(axis=0)
    delta1 = delta2 @ model.w2.T
    if masks is not None:
        delta1 = delta1 * masks[0]
    delta1 = delta1 * (z1 > 0)
    grad_w1 = X.T @ delta1
    grad_b1 = delta1.sum(axis=0)
    return loss, (grad_w1, grad_b1, grad_w2, grad_b2, grad_w3, grad_b3)


def fit_mlp(X, y, epochs: int = 200, learning_rate: float = 1e-3,
            dropout_rate: float = MLP_DROPOUT, seed: int = 0,
            n_classes: int | None = None) -> MlpClassifier:
    """Full-batch Adam with inverted dropout; inference is deterministic."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=int)
    _check_training_inputs(X, y)
    if not 0.0 <= dropout_rate < 1.0:
        raise ModelError(f"dropout_rate {dropout_rate} out of [0, 1)")
    k = n_classes if n_classes is not None else int(y.max()) + 1
    if y.max() >= k:
        raise ModelError(f"label {y.max()} out of range for {k} classes")
    d = X.shape[1]
    rng = np.random.default_rng(seed)
    model = MlpClassifier(
        w1=rng.normal(0.0, np.sqrt(2.0 / max(d, 1)), size=(d, MLP_HIDDEN1)),
        b1=np.zeros(MLP_HIDDEN1),
        w2=rng.normal(0.0, np.sqrt(1.0 / MLP_HIDDEN1), size=(MLP_HIDDEN1, MLP_HIDDEN2)),
        b2=np.zeros(MLP_HIDDEN2),
        w3=rng.normal(0.0, np.sqrt(1.0 / MLP_HIDDEN2), size=(MLP_HIDDEN2, k)),
        b3=np.zeros(k),
        dropout_rate=dropout_rate,
    )
    Y = one_hot(y, k)
    params = [model.w1, model.b1, model.w2, model.b2, model.w3, model.b3]
    opt = _Adam(params, lr=learning_rate)
    keep = 1.0 - dropout_rate
    for _ in range(epochs):
        if dropout_rate > 0.0:
            masks = (
                (rng.random((len(X), MLP_HIDDEN1)) < keep) / keep,
                (rng.random((len(X), MLP_HIDDEN2)) < keep) / keep,
            )
        else:
            masks = None
        loss, grads = mlp_loss_and_grads(model, X, Y, masks)
        model.loss_history.append(float(loss))
        opt.step(list(grads))
    return model


# ---------------------------------------------------------------------------
# l2 grid search over inner cross-validation folds
# ---------------------------------------------------------------------------

def grid_search(X, y, grid=DEFAULT_L2_GRID, inner_folds: int = 5, seed: int = 0,
                folds=None, resample_fn=None, n_classes: int | None = None,
                lr: float = DEFAULT_LR, max_iter: int = DEFAULT_MAX_ITER,
                tol: float = DEFAULT_TOL) -> float:
    """Pick the l2 strength maximizing mean inner-fold accuracy.

    Ties break toward stronger regularization. `folds` may supply precomputed
    inner folds (lists of indices); otherwise stratified folds are built here,
    falling back to unstratified ones when some class is smaller than the fold
    count. `resample_fn(X, y) -> (X, y)` is applied to inner-training splits only.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=int)
    grid = sorted(grid)
    if not grid:
        raise ModelError("hyperparameter grid must be non-empty")
    if folds is None:
        rng = np.random.default_rng(seed)
        counts = np.bincount(y)
        if counts[counts > 0].min() < inner_folds:
            warnings.warn(
                "stratification degenerate (a class is smaller than the fold "
                "count); using unstratified inner folds",
                RuntimeWarning,
                stacklevel=2,
            )
            folds = plain_partition(len(y), inner_folds, rng)
        else:
            folds = stratified_partition(y.tolist(), inner_folds, rng, warn_small=False)
    splits = train_val_splits(folds)

    best_l2 = None
    best_acc = -1.0
    for l2 in grid:
        accs = []
        for train_idx, val_idx in splits:
            X_tr, y_tr = X[train_idx], y[train_idx]
            if resample_fn is not None:
                X_tr, y_tr = resample_fn(X_tr, y_tr)
            clf = fit_softmax(
                X_tr, y_tr, l2, n_classes=n_classes, lr=lr, max_iter=max_iter, tol=tol
            )
            accs.append(float((predict(clf, X[val_idx]) == y[val_idx]).mean()))
        mean_acc = float(np.mean(accs))
        if mean_acc >= best_acc:  # >= so ties move toward larger l2
            best_acc = mean_acc
            best_l2 = l2
    return best_l2
