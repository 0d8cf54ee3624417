"""Encoder backends producing fixed-dimension title/body vectors.

Two families:

- HashingEncoder: a fully offline, deterministic stand-in (signed feature
  hashing of the leading tokens, L2-normalized). It satisfies the dimensional
  and finiteness contract whenever pretrained checkpoints are unreachable.
- TransformersEncoder: any local transformer checkpoint whose hidden size
  matches the group's per-part dimension, with max-pooling for titles and the
  classification-token state for bodies (configurable per group).
"""

from __future__ import annotations

import hashlib
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import EncoderUnavailable, ExtractError


@dataclass(frozen=True)
class GroupSpec:
    name: str
    part_dim: int  # per title/body part; emitted rows are 2x this
    lang: str  # "bg": original title/body, "en": title_en/body_en
    max_tokens: int
    title_pooling: str = "max"
    body_pooling: str = "cls"


GROUPS = {
    g.name: g
    for g in (
        GroupSpec("bert_bg", 768, "bg", 512),
        GroupSpec("bert_en", 768, "en", 512),
        GroupSpec("xlm_bg", 1024, "bg", 512, title_pooling="cls"),
        GroupSpec("use_en", 512, "en", 300),
        GroupSpec("elmo_en", 1024, "en", 512),
        GroupSpec("nela_en", 129, "en", 0),  # handled by the feature module
    )
}


class HashingEncoder:
    """Signed token hashing into `part_dim` buckets, salted per group/part.

    Deterministic across runs and platforms (blake2b); identical text maps to
    identical vectors, empty text to the zero vector.
    """

    def __init__(self, spec: GroupSpec):
        self.spec = spec

    def _encode(self, text: str, salt: str) -> np.ndarray:
        vec = np.zeros(self.spec.part_dim)
        tokens = text.split()[: self.spec.max_tokens]
        prefix = f"{self.spec.name}:{salt}:".encode()
        for token in tokens:
            digest = hashlib.blake2b(prefix + token.lower().encode(), digest_size=8)
            value = int.from_bytes(digest.digest(), "big")
            bucket = value % self.spec.part_dim
            sign = 1.0 if (value >> 40) & 1 else -1.0
            vec[bucket] += sign
        norm = np.linalg.norm(vec)
        return vec / norm if norm > 0 else vec

    def encode_title(self, text: str) -> np.ndarray:
        return self._encode(text, "title")

    def encode_body(self, text: str) -> np.ndarray:
        return self._encode(text, "body")


class TransformersEncoder:
    """Local transformer checkpoint; pooled last-layer hidden states."""

    def __init__(self, spec: GroupSpec, model_dir: str):
        self.spec = spec
        try:
            import torch
            from transformers import AutoModel, AutoTokenizer
        except ImportError as err:
            raise EncoderUnavailable(
                f"group {spec.name!r}: transformers backend needs the "
                f"'transformers' extra installed ({err})"
            ) from err
        self._torch = torch
        try:
            self.tokenizer = AutoTokenizer.from_pretrained(
                model_dir, local_files_only=True
            )
            self.model = AutoModel.from_pretrained(model_dir, local_files_only=True)
        except Exception as err:
            raise EncoderUnavailable(
                f"group {spec.name!r}: cannot load checkpoint from {model_dir!r} "
                f"({err})"
            ) from err
        self.model.eval()
        hidden = getattr(self.model.config, "hidden_size", None)
        if hidden != spec.part_dim:
            raise ExtractError(
                f"group {spec.name!r}: checkpoint hidden size {hidden} does not "
                f"match the required per-part dimension {spec.part_dim}"
            )

    def _encode(self, text: str, pooling: str) -> np.ndarray:
        torch = self._torch
        batch = self.tokenizer(
            text, return_tensors="pt", truncation=True,
            max_length=self.spec.max_tokens,
        )
        with torch.no_grad():
            states = self.model(**batch).last_hidden_state[0]  # (tokens, hidden)
        if pooling == "max":
            pooled = states.max(dim=0).values
        elif pooling == "cls":
            pooled = states[0]
        else:
            raise ExtractError(f"unknown pooling {pooling!r}")
        return pooled.double().numpy()

    def encode_title(self, text: str) -> np.ndarray:
        return self._encode(text, self.spec.title_pooling)

    def encode_body(self, text: str) -> np.ndarray:
        return self._encode(text, self.spec.body_pooling)


def resolve_encoder(spec: GroupSpec, backend: str = "auto", model_dir: str | None = None):
    """Pick a backend: 'transformers' demands a loadable local checkpoint,
    'hash' is always available, 'auto' prefers a checkpoint when given one."""
    if backend == "hash":
        return HashingEncoder(spec)
    if backend == "transformers":
        if not model_dir:
            raise EncoderUnavailable(
                f"group {spec.name!r}: transformers backend needs --model-dir"
            )
        return TransformersEncoder(spec, model_dir)
    if backend == "auto":
        if model_dir:
            return TransformersEncoder(spec, model_dir)
        warnings.warn(
            f"group {spec.name!r}: no checkpoint supplied, falling back to the "
            f"deterministic hashing encoder",
            RuntimeWarning,
            stacklevel=2,
        )
        return HashingEncoder(spec)
    raise ExtractError(f"unknown backend {backend!r}")
