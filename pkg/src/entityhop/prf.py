"""Pseudo-relevance-feedback query expansion.

Two methods, each kept inside its native framework:
  - Rocchio over TF-IDF:  q' = alpha*tfidf(q) + (beta/|Dr|) * sum_d tfidf(d),
    second pass scored by cosine. The negative-feedback term is fixed at 0
    (pseudo feedback has no judged non-relevant set).
  - RM3 over the language-modeling framework:
    P(w|R) proportional to sum_d P(w|d) * P(q|d), with P(w|d) the
    Dirichlet-smoothed document model and P(q|d) = exp(QL log score),
    max-shifted before exponentiation to avoid underflow. The truncated
    relevance model is interpolated with the maximum-likelihood query model:
    final = lambda*MLE(q) + (1-lambda)*P(w|R), and sums to 1.

Both expansions keep every original query term in the output.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

from .corpus import tokenize
from .errors import DataError
from .index import (
    DirichletParams,
    InvertedIndex,
    RankedList,
    _ranked,
    doc_tfidf_vector,
    tfidf_cosine,
    tfidf_vector,
)

# term -> non-negative weight; an RM3 output additionally sums to 1.
WeightedQuery = dict[str, float]


@dataclass(frozen=True)
class RocchioParams:
    alpha: float = 1.0
    beta: float = 0.75
    fb_docs: int = 10
    fb_terms: int = 10


@dataclass(frozen=True)
class Rm3Params:
    lam: float = 0.5  # weight of the original query model
    fb_docs: int = 10
    fb_terms: int = 10
    mu: float = 1500.0


def rocchio_expand(
    index: InvertedIndex,
    query: str,
    first_pass: RankedList,
    params: RocchioParams = RocchioParams(),
) -> WeightedQuery:
    """Expanded query: original terms plus the fb_terms highest-weight
    feedback terms (zero-weight candidates are not added)."""
    if not first_pass:
        raise DataError("no feedback documents")
    q_vec = tfidf_vector(index, query)
    fb_ids = [pid for pid, _ in first_pass[: params.fb_docs]]
    centroid: dict[str, float] = {}
    for pid in fb_ids:
        for t, w in doc_tfidf_vector(index, pid).items():
            centroid[t] = centroid.get(t, 0.0) + w
    scale = params.beta / len(fb_ids)
    raw: dict[str, float] = {t: params.alpha * w for t, w in q_vec.items()}
    for t, w in centroid.items():
        raw[t] = raw.get(t, 0.0) + scale * w
    orig = set(tokenize(query))
    candidates = [t for t in raw if t not in orig and raw[t] > 0.0]
    candidates.sort(key=lambda t: (-raw[t], t))
    keep = orig | set(candidates[: params.fb_terms])
    return {t: raw.get(t, 0.0) for t in sorted(keep)}


def rm3_expand(
    index: InvertedIndex,
    query: str,
    first_pass: RankedList,
    params: Rm3Params = Rm3Params(),
) -> WeightedQuery:
    """Interpolated relevance model; output is a probability distribution
    (non-negative, sums to 1 within 1e-9). first_pass scores must be QL
    log-likelihoods."""
    if not first_pass:
        raise DataError("no feedback documents")
    q_tokens = tokenize(query)
    if not q_tokens:
        raise DataError("empty query")
    mle = {t: c / len(q_tokens) for t, c in Counter(q_tokens).items()}

    fb = first_pass[: params.fb_docs]
    shift = max(score for _, score in fb)
    mu = params.mu
    rm: dict[str, float] = {}
    for pid, score in fb:
        w_d = math.exp(score - shift)
        tfs = index.doc_tfs[pid]
        dl = index.doc_lengths[pid]
        for t, tf in tfs.items():
            p_c = index.collection_freq[t] / index.total_tokens
            rm[t] = rm.get(t, 0.0) + w_d * (tf + mu * p_c) / (dl + mu)
    top = sorted(rm, key=lambda t: (-rm[t], t))[: params.fb_terms]
    z = sum(rm[t] for t in top)
    rm_trunc = {t: rm[t] / z for t in top} if z > 0 else {}

    lam = params.lam
    out: dict[str, float] = {}
    for t in sorted(set(mle) | set(rm_trunc)):
        out[t] = lam * mle.get(t, 0.0) + (1.0 - lam) * rm_trunc.get(t, 0.0)
    return out


def retrieve_weighted(
    index: InvertedIndex,
    wq: WeightedQuery,
    scorer: str = "ql",
    k: int = 25,
    params: DirichletParams = DirichletParams(),
) -> RankedList:
    """Second-pass retrieval for a weighted query.

    'tfidf-cosine' scores cosine(wq, tfidf(d)) over documents sharing at
    least one term with wq; 'ql' scores sum_w wq(w)*log P_smoothed(w|d)
    over all documents, skipping zero-collection-frequency terms.
    """
    if k < 1:
        raise DataError(f"k must be >= 1, got {k}")
    weights = {t: w for t, w in wq.items() if w > 0.0}
    if scorer == "tfidf-cosine":
        candidates: set[str] = set()
        for t in weights:
            for pid, _ in index.postings.get(t, ()):
                candidates.add(pid)
        scores = {pid: tfidf_cosine(index, weights, pid) for pid in candidates}
        scores = {pid: s for pid, s in scores.items() if s > 0.0}
    elif scorer == "ql":
        mu = params.mu
        usable = {t: w for t, w in weights.items() if index.collection_freq.get(t, 0) > 0}
        if not usable:
            return []
        total_w = sum(usable.values())
        base = 0.0
        for t, w in usable.items():
            base += w * math.log(mu * index.collection_freq[t] / index.total_tokens)
        adjust: dict[str, float] = {}
        for t, w in usable.items():
            mu_pc = mu * index.collection_freq[t] / index.total_tokens
            for pid, tf in index.postings[t]:
                adjust[pid] = adjust.get(pid, 0.0) + w * (math.log(tf + mu_pc) - math.log(mu_pc))
        scores = {}
        for pid, dl in index.doc_lengths.items():
            scores[pid] = base - total_w * math.log(dl + mu) + adjust.get(pid, 0.0)
    else:
        raise ValueError(f"unknown scorer: {scorer!r} (expected 'tfidf-cosine' or 'ql')")
    return _ranked(scores, k)
