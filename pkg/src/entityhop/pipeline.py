"""End-to-end retrieval pipelines: per-question rankings for every system
the evaluation harness compares.

Default initial-list sizes: 25 passages feed the entity-hop chain
re-ranker, 200 feed the pointwise re-ranker (it sees no hop candidates, so
it gets a deeper pool).
"""

from __future__ import annotations

from typing import Sequence

from .chains import ChainCaps, ChainSet, enumerate_chains
from .corpus import Corpus, Question
from .encoder import LexicalEncoder
from .index import (
    Bm25Params,
    DirichletParams,
    InvertedIndex,
    RankedList,
    retrieve,
    tfidf_vector,
)
from .linker import AliasTable
from .prf import Rm3Params, RocchioParams, retrieve_weighted, rm3_expand, rocchio_expand
from .reranker import FfnParams, Sample, build_chain_dataset, ffn_logit, rank_passages, sigmoid

HOP_INITIAL_K = 25
POINTWISE_INITIAL_K = 200


def bm25_rankings(
    index: InvertedIndex,
    questions: Sequence[Question],
    k: int,
    params: Bm25Params = Bm25Params(),
) -> dict[str, RankedList]:
    return {q.qid: retrieve(index, q.text, "bm25", k, params) for q in questions}


def ql_rankings(
    index: InvertedIndex,
    questions: Sequence[Question],
    k: int,
    params: DirichletParams = DirichletParams(),
) -> dict[str, RankedList]:
    return {q.qid: retrieve(index, q.text, "ql", k, params) for q in questions}


def rocchio_rankings(
    index: InvertedIndex,
    questions: Sequence[Question],
    k: int,
    params: RocchioParams = RocchioParams(),
    first_pass_k: int = 100,
    expansions: dict[str, dict[str, float]] | None = None,
) -> dict[str, RankedList]:
    """First pass is TF-IDF cosine (the expansion's native space). Pass a
    dict as `expansions` to capture each question's expanded query."""
    out: dict[str, RankedList] = {}
    for q in questions:
        first = retrieve_weighted(index, tfidf_vector(index, q.text), "tfidf-cosine", first_pass_k)
        if not first:
            out[q.qid] = []
            continue
        wq = rocchio_expand(index, q.text, first, params)
        if expansions is not None:
            expansions[q.qid] = wq
        out[q.qid] = retrieve_weighted(index, wq, "tfidf-cosine", k)
    return out


def rm3_rankings(
    index: InvertedIndex,
    questions: Sequence[Question],
    k: int,
    params: Rm3Params = Rm3Params(),
    first_pass_k: int = 100,
    expansions: dict[str, dict[str, float]] | None = None,
) -> dict[str, RankedList]:
    """First pass is Dirichlet-smoothed query likelihood."""
    dirichlet = DirichletParams(mu=params.mu)
    out: dict[str, RankedList] = {}
    for q in questions:
        first = retrieve(index, q.text, "ql", first_pass_k, dirichlet)
        if not first:
            out[q.qid] = []
            continue
        wq = rm3_expand(index, q.text, first, params)
        if expansions is not None:
            expansions[q.qid] = wq
        out[q.qid] = retrieve_weighted(index, wq, "ql", k, dirichlet)
    return out


def build_question_chains(
    index: InvertedIndex,
    corpus: Corpus,
    table: AliasTable,
    questions: Sequence[Question],
    initial_k: int = HOP_INITIAL_K,
    caps: ChainCaps = ChainCaps(),
    scorer: str = "bm25",
) -> dict[str, ChainSet]:
    out: dict[str, ChainSet] = {}
    for q in questions:
        initial = retrieve(index, q.text, scorer, initial_k)
        out[q.qid] = enumerate_chains(initial, corpus, table, caps, qid=q.qid)
    return out


def entity_hop_rankings(
    params: FfnParams,
    encoder,
    corpus: Corpus,
    questions: Sequence[Question],
    chain_sets: dict[str, ChainSet],
    k: int,
    entity_only: bool = False,
) -> dict[str, RankedList]:
    return {
        q.qid: rank_passages(params, encoder, q, chain_sets[q.qid], corpus, k, entity_only)
        for q in questions
    }


def pointwise_rankings(
    params: FfnParams,
    encoder,
    index: InvertedIndex,
    corpus: Corpus,
    questions: Sequence[Question],
    k: int,
    initial_k: int = POINTWISE_INITIAL_K,
) -> dict[str, RankedList]:
    """Re-rank each question's top initial passages independently."""
    out: dict[str, RankedList] = {}
    for q in questions:
        scored: dict[str, float] = {}
        for pid, _ in retrieve(index, q.text, "bm25", initial_k):
            x = encoder.encode(q.text, corpus.get(pid)).vector
            scored[pid] = float(sigmoid(ffn_logit(params, x)))
        out[q.qid] = sorted(scored.items(), key=lambda kv: (-kv[1], kv[0]))[:k]
    return out


def chain_training_samples(
    index: InvertedIndex,
    corpus: Corpus,
    table: AliasTable,
    questions: Sequence[Question],
    initial_k: int = HOP_INITIAL_K,
    caps: ChainCaps = ChainCaps(),
    encoder=None,
    entity_only: bool = False,
) -> list[Sample]:
    encoder = encoder or LexicalEncoder(index)
    chain_sets = build_question_chains(index, corpus, table, questions, initial_k, caps)
    return build_chain_dataset(questions, chain_sets, corpus, encoder, entity_only)
