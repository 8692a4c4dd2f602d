"""Query-aware passage representations.

Two providers behind one interface:

  - LexicalEncoder: 8 deterministic lexical features computed against an
    inverted index, so the whole pipeline runs with no model downloads.
  - RemoteEncoder: client for an embedding sidecar speaking
    newline-delimited JSON over TCP (handshake declares the dimension).

Feature layout of the lexical provider (all finite; 1-5 and 7 in [0,1],
6 non-negative, 8 exactly 1):
  1. fraction of distinct query terms present in the passage
  2. BM25 score squashed to score/(1+score)
  3. TF-IDF cosine between query and passage
  4. exp(mean per-token Dirichlet QL log-likelihood) - the geometric mean
     of smoothed term probabilities, a [0,1] transform of the QL score
  5. fraction of passage mentions sharing a term with the query
  6. log(1 + passage length in tokens)
  7. fraction of distinct query bigrams present in the passage
  8. constant bias 1
"""

from __future__ import annotations

import json
import math
import socket
import threading
from dataclasses import dataclass

import numpy as np

from .corpus import Passage, tokenize
from .errors import RemoteEncoderError
from .index import (
    Bm25Params,
    DirichletParams,
    InvertedIndex,
    bm25_score,
    ql_dirichlet_score,
    tfidf_cosine,
    tfidf_vector,
)

LEXICAL_DIM = 8


@dataclass(frozen=True)
class EncoderConfig:
    provider: str = "lexical"  # "lexical" | "remote"
    dim: int = LEXICAL_DIM  # for remote: 0 = adopt the handshake dim
    endpoint: str = ""  # host:port, remote only


@dataclass
class QueryAwareRepr:
    vector: np.ndarray
    provider: str


def _bigrams(tokens: list[str]) -> set[tuple[str, str]]:
    return set(zip(tokens, tokens[1:]))


class LexicalEncoder:
    """Pure function of (query, passage) given a fixed index; memoized by
    (query, passage id)."""

    provider = "lexical"
    dim = LEXICAL_DIM

    def __init__(
        self,
        index: InvertedIndex,
        bm25: Bm25Params = Bm25Params(),
        dirichlet: DirichletParams = DirichletParams(),
        memoize: bool = True,
    ):
        self.index = index
        self.bm25 = bm25
        self.dirichlet = dirichlet
        self._memo: dict[tuple[str, str], np.ndarray] | None = {} if memoize else None
        self._query_cache: dict[str, tuple[list[str], set[str], dict[str, float], set]] = {}
        self._doc_bigrams: dict[str, set[tuple[str, str]]] = {}

    def _query_parts(self, query: str):
        parts = self._query_cache.get(query)
        if parts is None:
            toks = tokenize(query)
            parts = (toks, set(toks), tfidf_vector(self.index, query), _bigrams(toks))
            if len(self._query_cache) > 4096:
                self._query_cache.clear()
            self._query_cache[query] = parts
        return parts

    def encode(self, query: str, passage: Passage) -> QueryAwareRepr:
        key = (query, passage.id)
        if self._memo is not None and key in self._memo:
            return QueryAwareRepr(vector=self._memo[key], provider=self.provider)

        idx = self.index
        q_tokens, q_set, q_vec, q_bigrams = self._query_parts(query)
        d_tfs = idx.doc_tfs[passage.id]

        f1 = (
            sum(1 for t in q_set if t in d_tfs) / len(q_set) if q_set else 0.0
        )
        s_bm25 = bm25_score(idx, q_tokens, passage.id, self.bm25)
        f2 = s_bm25 / (1.0 + s_bm25)
        f3 = min(1.0, tfidf_cosine(idx, q_vec, passage.id))  # rounding can nudge past 1
        s_ql = ql_dirichlet_score(idx, q_tokens, passage.id, self.dirichlet)
        f4 = math.exp(s_ql / max(1, len(q_tokens)))
        if passage.mentions:
            sharing = sum(
                1 for m in passage.mentions if q_set & set(tokenize(m.surface))
            )
            f5 = sharing / len(passage.mentions)
        else:
            f5 = 0.0
        f6 = math.log1p(idx.doc_lengths[passage.id])
        if q_bigrams:
            d_bigrams = self._doc_bigrams.get(passage.id)
            if d_bigrams is None:
                d_bigrams = _bigrams(tokenize(passage.text))
                self._doc_bigrams[passage.id] = d_bigrams
            f7 = len(q_bigrams & d_bigrams) / len(q_bigrams)
        else:
            f7 = 0.0

        vec = np.array([f1, f2, f3, f4, f5, f6, f7, 1.0], dtype=np.float64)
        vec.setflags(write=False)
        if self._memo is not None:
            self._memo[key] = vec
        return QueryAwareRepr(vector=vec, provider=self.provider)

    def encode_batch(self, query: str, passages: list[Passage]) -> list[QueryAwareRepr]:
        return [self.encode(query, p) for p in passages]


class RemoteEncoder:
    """Client for the embedding sidecar.

    Wire protocol (newline-delimited JSON over TCP):
      -> {"op":"hello"}                                <- {"op":"hello","dim":D}
      -> {"op":"encode","query":q,"text":t}            <- {"op":"vec","v":[...]}
      -> {"op":"encode_batch","query":q,"texts":[..]}  <- {"op":"vecs","vs":[[..],..]}
      any error                                        <- {"op":"err","msg":..}

    One request in flight per connection; the instance serializes requests
    with a lock so it can be shared across threads.
    """

    provider = "remote"

    def __init__(self, endpoint: str, expected_dim: int = 0, timeout: float = 30.0):
        self.endpoint = endpoint
        host, _, port = endpoint.rpartition(":")
        if not host or not port.isdigit():
            raise RemoteEncoderError(f"bad endpoint {endpoint!r}, expected host:port")
        self._lock = threading.Lock()
        try:
            self._sock = socket.create_connection((host, int(port)), timeout=timeout)
            self._reader = self._sock.makefile("r", encoding="utf-8")
        except OSError as exc:
            raise RemoteEncoderError(f"{endpoint}: connect failed: {exc}") from exc
        reply = self._request({"op": "hello"})
        if reply.get("op") != "hello" or not isinstance(reply.get("dim"), int):
            raise RemoteEncoderError(f"{endpoint}: bad handshake reply: {reply!r}")
        self.dim = reply["dim"]
        if expected_dim and self.dim != expected_dim:
            raise RemoteEncoderError(
                f"{endpoint}: service dim {self.dim} != configured dim {expected_dim}"
            )

    def _request(self, obj: dict) -> dict:
        with self._lock:
            try:
                self._sock.sendall((json.dumps(obj) + "\n").encode("utf-8"))
                line = self._reader.readline()
            except OSError as exc:
                raise RemoteEncoderError(f"{self.endpoint}: i/o failed: {exc}") from exc
        if not line:
            raise RemoteEncoderError(f"{self.endpoint}: connection closed by service")
        try:
            reply = json.loads(line)
        except json.JSONDecodeError as exc:
            raise RemoteEncoderError(f"{self.endpoint}: bad reply line: {exc}") from exc
        if reply.get("op") == "err":
            raise RemoteEncoderError(f"{self.endpoint}: service error: {reply.get('msg')}")
        return reply

    def _to_vector(self, v, where: str) -> np.ndarray:
        vec = np.asarray(v, dtype=np.float64)
        if vec.shape != (self.dim,):
            raise RemoteEncoderError(
                f"{self.endpoint}: {where}: vector length {vec.shape} != dim {self.dim}"
            )
        if not np.all(np.isfinite(vec)):
            raise RemoteEncoderError(f"{self.endpoint}: {where}: non-finite entries")
        vec.setflags(write=False)
        return vec

    def encode(self, query: str, passage: Passage) -> QueryAwareRepr:
        reply = self._request({"op": "encode", "query": query, "text": passage.text})
        if reply.get("op") != "vec":
            raise RemoteEncoderError(f"{self.endpoint}: unexpected reply op {reply.get('op')!r}")
        return QueryAwareRepr(vector=self._to_vector(reply.get("v"), "encode"), provider="remote")

    def encode_batch(self, query: str, passages: list[Passage]) -> list[QueryAwareRepr]:
        if not passages:
            return []
        reply = self._request(
            {"op": "encode_batch", "query": query, "texts": [p.text for p in passages]}
        )
        if reply.get("op") != "vecs":
            raise RemoteEncoderError(f"{self.endpoint}: unexpected reply op {reply.get('op')!r}")
        vs = reply.get("vs")
        if not isinstance(vs, list) or len(vs) != len(passages):
            raise RemoteEncoderError(
                f"{self.endpoint}: batch size mismatch: sent {len(passages)}, "
                f"got {len(vs) if isinstance(vs, list) else type(vs).__name__}"
            )
        return [
            QueryAwareRepr(vector=self._to_vector(v, f"encode_batch[{i}]"), provider="remote")
            for i, v in enumerate(vs)
        ]

    def close(self) -> None:
        try:
            self._reader.close()
            self._sock.close()
        except OSError:
            pass

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def make_encoder(config: EncoderConfig, index: InvertedIndex | None = None):
    if config.provider == "lexical":
        if index is None:
            raise ValueError("lexical encoder requires an index")
        return LexicalEncoder(index)
    if config.provider == "remote":
        return RemoteEncoder(config.endpoint, expected_dim=config.dim)
    raise ValueError(f"unknown encoder provider: {config.provider!r}")
