"""TF-IDF vectorization and truncated SVD for title/body latent representations."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from .errors import ModelError
from .local_features import TokenizedText

TITLE_DIM = 15
BODY_DIM = 200


@dataclass
class TfidfModel:
    vocabulary: dict[str, int]
    idf: np.ndarray  # (V,)
    document_count: int


def _terms(doc: TokenizedText):
    return (t.lower() for t in doc.tokens)


def fit_tfidf(docs: Sequence[TokenizedText]) -> TfidfModel:
    """Vocabulary over lowercased terms with smoothed idf = ln((1+N)/(1+df)) + 1."""
    if not docs:
        raise ModelError("fit_tfidf needs at least one document")
    df: dict[str, int] = {}
    for doc in docs:
        for term in set(_terms(doc)):
            df[term] = df.get(term, 0) + 1
    vocabulary = {term: i for i, term in enumerate(sorted(df))}
    n = len(docs)
    idf = np.empty(len(vocabulary))
    for term, i in vocabulary.items():
        idf[i] = np.log((1.0 + n) / (1.0 + df[term])) + 1.0
    return TfidfModel(vocabulary=vocabulary, idf=idf, document_count=n)


def tfidf_transform(model: TfidfModel, docs: Sequence[TokenizedText]) -> sp.csr_matrix:
    """Raw term counts times idf, L2-normalized per row (zero rows stay zero).

    Out-of-vocabulary terms are dropped.
    """
    vocab = model.vocabulary
    indptr = [0]
    indices: list[int] = []
    data: list[float] = []
    for doc in docs:
        counts: dict[int, int] = {}
        for term in _terms(doc):
            col = vocab.get(term)
            if col is not None:
                counts[col] = counts.get(col, 0) + 1
        row = sorted(counts.items())
        vals = np.array([c * model.idf[j] for j, c in row])
        norm = np.linalg.norm(vals)
        if norm > 0:
            vals = vals / norm
        indices.extend(j for j, _ in row)
        data.extend(vals)
        indptr.append(len(indices))
    return sp.csr_matrix(
        (np.asarray(data, dtype=float), np.asarray(indices, dtype=np.int32), indptr),
        shape=(len(docs), len(vocab)),
    )


@dataclass
class SvdProjector:
    components: np.ndarray  # (k, V), orthonormal rows
    singular_values: np.ndarray  # (k,), non-increasing

    @property
    def k(self) -> int:
        return self.components.shape[0]

    def project(self, matrix) -> np.ndarray:
        if matrix.shape[1] != self.components.shape[1]:
            raise ModelError(
                f"cannot project width-{matrix.shape[1]} rows with "
                f"width-{self.components.shape[1]} components"
            )
        out = matrix @ self.components.T
        return np.asarray(out)


def fit_svd(matrix, k: int, seed: int = 0, max_iter: int = 300, tol: float = 1e-12) -> SvdProjector:
    """Top-k right singular vectors of the uncentered matrix.

    Subspace (block power) iteration with QR re-orthonormalization and a small
    Rayleigh-Ritz extraction; oversampled by up to 10 extra directions. Signs are
    fixed so each component's largest-magnitude entry is positive.
    """
    n, v = matrix.shape
    if not 1 <= k <= min(n, v):
        raise ModelError(f"k={k} out of range for a {n}x{v} matrix")

    rng = np.random.default_rng(seed)
    q = min(k + 10, v)
    basis = np.linalg.qr(rng.standard_normal((v, q)))[0]

    prev = None
    for _ in range(max_iter):
        projected = matrix @ basis  # (n, q)
        basis = np.linalg.qr(matrix.T @ projected)[0]  # (v, q)
        # Ritz values on the current subspace
        projected = np.asarray(matrix @ basis)
        gram = projected.T @ projected
        eigvals = np.linalg.eigvalsh(gram)[::-1][:k]
        sigma = np.sqrt(np.clip(eigvals, 0.0, None))
        if prev is not None and np.all(
            np.abs(sigma - prev) <= tol * np.maximum(sigma, 1.0)
        ):
            break
        prev = sigma

    projected = np.asarray(matrix @ basis)
    gram = projected.T @ projected
    eigvals, eigvecs = np.linalg.eigh(gram)
    order = np.argsort(eigvals)[::-1][:k]
    singular_values = np.sqrt(np.clip(eigvals[order], 0.0, None))
    components = (basis @ eigvecs[:, order]).T  # (k, v)

    # deterministic sign: largest-|entry| of each component is positive
    for row in components:
        j = np.argmax(np.abs(row))
        if row[j] < 0:
            row *= -1.0

    return SvdProjector(components=components, singular_values=singular_values)


@dataclass
class LsaPart:
    """One fitted text side (title or body): TF-IDF model plus SVD projector."""

    tfidf: TfidfModel
    svd: SvdProjector

    @property
    def dim(self) -> int:
        return self.svd.k

    def transform(self, docs: Sequence[TokenizedText]) -> np.ndarray:
        return self.svd.project(tfidf_transform(self.tfidf, docs))

    def to_json_dict(self) -> dict:
        return {
            "version": 1,
            "vocabulary": self.tfidf.vocabulary,
            "idf": self.tfidf.idf.tolist(),
            "document_count": self.tfidf.document_count,
            "components": self.svd.components.tolist(),
            "singular_values": self.svd.singular_values.tolist(),
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "LsaPart":
        if obj.get("version") != 1:
            raise ModelError(f"unsupported LSA dump version {obj.get('version')!r}")
        return cls(
            tfidf=TfidfModel(
                vocabulary=dict(obj["vocabulary"]),
                idf=np.asarray(obj["idf"], dtype=float),
                document_count=int(obj["document_count"]),
            ),
            svd=SvdProjector(
                components=np.asarray(obj["components"], dtype=float),
                singular_values=np.asarray(obj["singular_values"], dtype=float),
            ),
        )


def fit_lsa_part(docs: Sequence[TokenizedText], k: int, seed: int = 0) -> LsaPart:
    """Fit TF-IDF + truncated SVD, clamping k to min(N, V) when the corpus is small."""
    tfidf = fit_tfidf(docs)
    matrix = tfidf_transform(tfidf, docs)
    limit = min(matrix.shape)
    if k > limit:
        warnings.warn(
            f"LSA dimension {k} clamped to {limit} for a "
            f"{matrix.shape[0]}x{matrix.shape[1]} corpus",
            RuntimeWarning,
            stacklevel=2,
        )
        k = limit
    return LsaPart(tfidf=tfidf, svd=fit_svd(matrix, k, seed=seed))


def lsa_features(title_doc: TokenizedText, body_doc: TokenizedText,
                 title_model: LsaPart, body_model: LsaPart) -> np.ndarray:
    """Concatenated title and body projections (nominally 15 + 200 dims)."""
    title_vec = title_model.transform([title_doc])[0]
    body_vec = body_model.transform([body_doc])[0]
    return np.concatenate([title_vec, body_vec])
