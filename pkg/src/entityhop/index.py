"""Inverted index over a corpus plus the first-pass scorers.

Scorers:
  - Okapi BM25 with the +1-inside-log idf (never negative),
    idf(t) = ln(1 + (N - df + 0.5)/(df + 0.5)),
    score  = sum_t idf(t) * tf*(k1+1) / (tf + k1*(1 - b + b*dl/avgdl)).
  - Query likelihood with Dirichlet prior smoothing,
    score  = sum_t log((c(t,d) + mu*P(t|C)) / (|d| + mu)),
    terms with zero collection frequency are skipped (kept finite).
  - TF-IDF vectors, weight(t) = tf(t) * ln(N/df(t)), consumed by Rocchio.

Repeated query tokens contribute once per occurrence, matching the
multinomial query-likelihood reading of the query.

The index is immutable after build; concurrent scoring reads are safe.
All scores are float64 and every ranking tie-breaks on ascending passage id.
"""

from __future__ import annotations

import math
import struct
from collections import Counter, defaultdict
from dataclasses import dataclass
from pathlib import Path

from .corpus import Corpus, tokenize
from .errors import DataError

# (passage id, score) pairs, scores non-increasing, ties by ascending id.
RankedList = list[tuple[str, float]]

_MAGIC = b"EHIX"
_VERSION = 1


@dataclass(frozen=True)
class Bm25Params:
    k1: float = 1.2
    b: float = 0.75


@dataclass(frozen=True)
class DirichletParams:
    mu: float = 1500.0


class InvertedIndex:
    """Postings, document lengths, and collection statistics.

    postings maps term -> [(passage id, tf), ...] sorted by passage id;
    doc_tfs is the forward view (passage id -> {term: tf}).
    """

    def __init__(
        self,
        postings: dict[str, list[tuple[str, int]]],
        doc_lengths: dict[str, int],
        total_tokens: int,
    ):
        self.postings = postings
        self.doc_lengths = doc_lengths
        self.doc_count = len(doc_lengths)
        self.total_tokens = total_tokens
        self.avg_doc_len = total_tokens / self.doc_count if self.doc_count else 0.0
        self.collection_freq = {t: sum(tf for _, tf in ps) for t, ps in postings.items()}
        self.doc_tfs: dict[str, dict[str, int]] = {pid: {} for pid in doc_lengths}
        for term, ps in postings.items():
            for pid, tf in ps:
                self.doc_tfs[pid][term] = tf
        self._tfidf_norms: dict[str, float] = {}

    def df(self, term: str) -> int:
        return len(self.postings.get(term, ()))

    def __contains__(self, pid: str) -> bool:
        return pid in self.doc_lengths

    def _check_pid(self, pid: str) -> None:
        if pid not in self.doc_lengths:
            raise KeyError(f"passage id not in index: {pid!r}")


def build_index(corpus: Corpus) -> InvertedIndex:
    """Deterministic for a fixed corpus; empty corpus yields an empty index."""
    acc: dict[str, dict[str, int]] = defaultdict(dict)
    doc_lengths: dict[str, int] = {}
    total = 0
    for p in corpus:
        tfs = Counter(tokenize(p.text))
        doc_lengths[p.id] = sum(tfs.values())
        total += doc_lengths[p.id]
        for term, tf in tfs.items():
            acc[term][p.id] = tf
    postings = {term: sorted(by_doc.items()) for term, by_doc in acc.items()}
    return InvertedIndex(postings=postings, doc_lengths=doc_lengths, total_tokens=total)


def _bm25_idf(index: InvertedIndex, term: str) -> float:
    df = index.df(term)
    if df == 0:
        return 0.0
    n = index.doc_count
    return math.log(1.0 + (n - df + 0.5) / (df + 0.5))


def bm25_score(
    index: InvertedIndex,
    query_terms: list[str],
    passage_id: str,
    params: Bm25Params = Bm25Params(),
) -> float:
    """BM25 score of one indexed passage; absent terms contribute 0."""
    index._check_pid(passage_id)
    tfs = index.doc_tfs[passage_id]
    dl = index.doc_lengths[passage_id]
    norm = params.k1 * (1.0 - params.b + params.b * dl / index.avg_doc_len)
    score = 0.0
    for t in query_terms:
        tf = tfs.get(t)
        if not tf:
            continue
        score += _bm25_idf(index, t) * tf * (params.k1 + 1.0) / (tf + norm)
    return score


def ql_dirichlet_score(
    index: InvertedIndex,
    query_terms: list[str],
    passage_id: str,
    params: DirichletParams = DirichletParams(),
) -> float:
    """Dirichlet-smoothed query log-likelihood; zero-collection-frequency
    terms are skipped (see skipped_query_terms for the count)."""
    index._check_pid(passage_id)
    tfs = index.doc_tfs[passage_id]
    dl = index.doc_lengths[passage_id]
    mu = params.mu
    score = 0.0
    for t in query_terms:
        cf = index.collection_freq.get(t, 0)
        if cf == 0:
            continue
        p_c = cf / index.total_tokens
        score += math.log((tfs.get(t, 0) + mu * p_c) / (dl + mu))
    return score


def skipped_query_terms(index: InvertedIndex, query_terms: list[str]) -> list[str]:
    """Query terms the QL scorer skips (zero collection frequency)."""
    return [t for t in query_terms if index.collection_freq.get(t, 0) == 0]


def _ranked(scores: dict[str, float], k: int) -> RankedList:
    top = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))
    return top[:k]


def _bm25_all_scores(
    index: InvertedIndex, terms: list[str], params: Bm25Params
) -> dict[str, float]:
    # Postings-driven: only documents containing at least one query term.
    scores: dict[str, float] = defaultdict(float)
    k1, b = params.k1, params.b
    avgdl = index.avg_doc_len
    for t, qtf in Counter(terms).items():
        idf = _bm25_idf(index, t)
        if idf == 0.0:
            continue
        for pid, tf in index.postings[t]:
            norm = k1 * (1.0 - b + b * index.doc_lengths[pid] / avgdl)
            scores[pid] += qtf * idf * tf * (k1 + 1.0) / (tf + norm)
    return scores


def _ql_all_scores(
    index: InvertedIndex, terms: list[str], params: DirichletParams
) -> dict[str, float]:
    # score(d) = sum_t qtf*log(mu*p_c)  -  Q*log(dl+mu)  +  match adjustments,
    # which scores every document while touching only matching postings.
    mu = params.mu
    qtfs = {t: qtf for t, qtf in Counter(terms).items() if index.collection_freq.get(t, 0) > 0}
    if not qtfs:
        return {}
    q_len = sum(qtfs.values())
    base = 0.0
    for t, qtf in qtfs.items():
        base += qtf * math.log(mu * index.collection_freq[t] / index.total_tokens)
    adjust: dict[str, float] = defaultdict(float)
    for t, qtf in qtfs.items():
        mu_pc = mu * index.collection_freq[t] / index.total_tokens
        for pid, tf in index.postings[t]:
            adjust[pid] += qtf * (math.log(tf + mu_pc) - math.log(mu_pc))
    scores: dict[str, float] = {}
    for pid, dl in index.doc_lengths.items():
        scores[pid] = base - q_len * math.log(dl + mu) + adjust.get(pid, 0.0)
    return scores


def retrieve(
    index: InvertedIndex,
    query: str,
    scorer: str = "bm25",
    k: int = 25,
    params: Bm25Params | DirichletParams | None = None,
) -> RankedList:
    """Top-k passages for a plain-text query.

    BM25 excludes passages with score <= 0 (no query term present). QL
    returns an empty list when every query term has zero collection
    frequency (there is nothing to rank on).
    """
    if k < 1:
        raise DataError(f"k must be >= 1, got {k}")
    terms = tokenize(query)
    if scorer == "bm25":
        scores = _bm25_all_scores(index, terms, params or Bm25Params())
        scores = {pid: s for pid, s in scores.items() if s > 0.0}
    elif scorer == "ql":
        scores = _ql_all_scores(index, terms, params or DirichletParams())
    else:
        raise ValueError(f"unknown scorer: {scorer!r} (expected 'bm25' or 'ql')")
    return _ranked(scores, k)


def tfidf_vector(index: InvertedIndex, text: str) -> dict[str, float]:
    """Sparse TF-IDF weights for arbitrary text; terms unknown to the
    corpus (df = 0) are dropped."""
    out: dict[str, float] = {}
    for t, tf in Counter(tokenize(text)).items():
        df = index.df(t)
        if df > 0:
            out[t] = tf * math.log(index.doc_count / df)
    return out


def doc_tfidf_vector(index: InvertedIndex, passage_id: str) -> dict[str, float]:
    """TF-IDF weights of an indexed passage, from stored term frequencies."""
    index._check_pid(passage_id)
    n = index.doc_count
    return {t: tf * math.log(n / index.df(t)) for t, tf in index.doc_tfs[passage_id].items()}


def doc_tfidf_norm(index: InvertedIndex, passage_id: str) -> float:
    """Euclidean norm of the passage TF-IDF vector, cached on the index."""
    norm = index._tfidf_norms.get(passage_id)
    if norm is None:
        vec = doc_tfidf_vector(index, passage_id)
        norm = math.sqrt(sum(w * w for w in vec.values()))
        index._tfidf_norms[passage_id] = norm
    return norm


def tfidf_cosine(index: InvertedIndex, query_vec: dict[str, float], passage_id: str) -> float:
    """Cosine between an arbitrary TF-IDF-space vector and a passage."""
    q_norm = math.sqrt(sum(w * w for w in query_vec.values()))
    d_norm = doc_tfidf_norm(index, passage_id)
    if q_norm == 0.0 or d_norm == 0.0:
        return 0.0
    tfs = index.doc_tfs[passage_id]
    n = index.doc_count
    dot = 0.0
    for t, wq in query_vec.items():
        tf = tfs.get(t)
        if tf:
            dot += wq * tf * math.log(n / index.df(t))
    return dot / (q_norm * d_norm)


def _pack_str(s: str) -> bytes:
    raw = s.encode("utf-8")
    if len(raw) > 0xFFFF:
        raise DataError(f"string too long for index file: {len(raw)} bytes")
    return struct.pack("<H", len(raw)) + raw


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, fmt: str):
        vals = struct.unpack_from(fmt, self.data, self.pos)
        self.pos += struct.calcsize(fmt)
        return vals

    def take_str(self) -> str:
        (n,) = self.take("<H")
        raw = self.data[self.pos : self.pos + n]
        self.pos += n
        return raw.decode("utf-8")


def save_index(index: InvertedIndex, path: str | Path) -> None:
    """Versioned binary index file.

    Layout (little-endian):
      magic "EHIX" | u32 version | u32 doc_count | u64 total_tokens |
      docs sorted by id: (u16 len, utf-8 id, u32 doc_length) |
      u32 n_terms | terms sorted: (u16 len, utf-8 term, u32 df,
        postings: (u32 doc_index, u32 tf) referencing the sorted doc table).
    Two builds of the same corpus serialize byte-identically.
    """
    doc_ids = sorted(index.doc_lengths)
    doc_pos = {pid: i for i, pid in enumerate(doc_ids)}
    parts = [_MAGIC, struct.pack("<IIQ", _VERSION, len(doc_ids), index.total_tokens)]
    for pid in doc_ids:
        parts.append(_pack_str(pid))
        parts.append(struct.pack("<I", index.doc_lengths[pid]))
    terms = sorted(index.postings)
    parts.append(struct.pack("<I", len(terms)))
    for t in terms:
        ps = sorted(index.postings[t])
        parts.append(_pack_str(t))
        parts.append(struct.pack("<I", len(ps)))
        for pid, tf in ps:
            parts.append(struct.pack("<II", doc_pos[pid], tf))
    Path(path).write_bytes(b"".join(parts))


def load_index(path: str | Path) -> InvertedIndex:
    data = Path(path).read_bytes()
    r = _Reader(data)
    if data[:4] != _MAGIC:
        raise DataError(f"{path}: not an index file (bad magic)")
    r.pos = 4
    version, doc_count, total_tokens = r.take("<IIQ")
    if version != _VERSION:
        raise DataError(f"{path}: unsupported index version {version}")
    doc_ids: list[str] = []
    doc_lengths: dict[str, int] = {}
    for _ in range(doc_count):
        pid = r.take_str()
        (dl,) = r.take("<I")
        doc_ids.append(pid)
        doc_lengths[pid] = dl
    (n_terms,) = r.take("<I")
    postings: dict[str, list[tuple[str, int]]] = {}
    for _ in range(n_terms):
        term = r.take_str()
        (df,) = r.take("<I")
        ps = []
        for _ in range(df):
            doc_idx, tf = r.take("<II")
            ps.append((doc_ids[doc_idx], tf))
        postings[term] = ps
    return InvertedIndex(postings=postings, doc_lengths=doc_lengths, total_tokens=total_tokens)
