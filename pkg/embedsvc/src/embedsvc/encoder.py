"""Query-conditioned text encoders.

The default backend is a hashed random projection: tokens of the query,
the (truncated) passage, and their intersection are feature-hashed into a
fixed-dimension vector with stable signs, then L2-normalized. It needs no
model weights, is bit-deterministic across processes, and stands in for a
pooled contextual representation behind the same wire contract.

A transformers backend can wrap a locally available pretrained model
(pass a model directory); it pools the first token of the joined
"query [SEP] passage" input in eval mode, so outputs are deterministic.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass

import numpy as np

_WORD_RE = re.compile(r"[^\W_]+")

# Field keys keep query, passage, and interaction tokens in distinct
# hash spaces so "same word in both" is its own signal.
_FIELD_QUERY = b"q"
_FIELD_TEXT = b"d"
_FIELD_BOTH = b"x"


def tokenize(text: str) -> list[str]:
    return _WORD_RE.findall(text.lower())


def _bucket(token: str, field: bytes, dim: int) -> tuple[int, float]:
    digest = hashlib.blake2b(field + b":" + token.encode("utf-8"), digest_size=8).digest()
    value = int.from_bytes(digest, "big")
    return value % dim, 1.0 if (value >> 63) & 1 else -1.0


@dataclass(frozen=True)
class Encoding:
    vector: np.ndarray
    truncated: bool


class HashedProjectionEncoder:
    """Stateless and pure: identical (query, text) always produce the
    identical vector. Truncation applies to the passage side only."""

    def __init__(self, dim: int = 64, max_len: int = 256):
        if dim < 1:
            raise ValueError(f"dim must be >= 1, got {dim}")
        self.dim = dim
        self.max_len = max_len
        self.model_id = f"hashed-projection-{dim}"

    def encode(self, query: str, text: str) -> Encoding:
        q_tokens = tokenize(query)
        d_tokens = tokenize(text)
        truncated = len(d_tokens) > self.max_len
        if truncated:
            d_tokens = d_tokens[: self.max_len]
        vec = np.zeros(self.dim, dtype=np.float64)
        for t in q_tokens:
            i, s = _bucket(t, _FIELD_QUERY, self.dim)
            vec[i] += s
        d_set = set(d_tokens)
        for t in d_tokens:
            i, s = _bucket(t, _FIELD_TEXT, self.dim)
            vec[i] += s
        for t in set(q_tokens) & d_set:
            i, s = _bucket(t, _FIELD_BOTH, self.dim)
            vec[i] += 2.0 * s
        norm = float(np.linalg.norm(vec))
        if norm > 0.0:
            vec /= norm
        return Encoding(vector=vec, truncated=truncated)


class TransformersEncoder:
    """Wraps a locally available pretrained contextual model (no downloads
    are attempted). Query and passage are joined with the tokenizer's own
    sentence-pair separator; the first pooled token is the representation."""

    def __init__(self, model_path: str, max_len: int = 256):
        import torch
        from transformers import AutoModel, AutoTokenizer

        self._torch = torch
        self._tokenizer = AutoTokenizer.from_pretrained(model_path, local_files_only=True)
        self._model = AutoModel.from_pretrained(model_path, local_files_only=True)
        self._model.eval()
        self.max_len = max_len
        self.dim = int(self._model.config.hidden_size)
        self.model_id = model_path
        import threading

        self._lock = threading.Lock()

    def encode(self, query: str, text: str) -> Encoding:
        d_tokens = tokenize(text)
        truncated = len(d_tokens) > self.max_len
        if truncated:
            text = " ".join(d_tokens[: self.max_len])
        with self._lock, self._torch.no_grad():
            batch = self._tokenizer(
                query, text, return_tensors="pt", truncation=True, max_length=512
            )
            out = self._model(**batch).last_hidden_state[0, 0]
        return Encoding(vector=out.double().numpy(), truncated=truncated)


def make_backend(model: str, dim: int, max_len: int):
    """"hashed" (default) or "transformers:<local path>"."""
    if model == "hashed":
        return HashedProjectionEncoder(dim=dim, max_len=max_len)
    if model.startswith("transformers:"):
        return TransformersEncoder(model.split(":", 1)[1], max_len=max_len)
    raise ValueError(f"unknown model spec: {model!r}")
