"""Length-2 evidence chains and the trainable re-ranker: enumerate
(initial passage, hop target) pairs with self-links, label them by
whether the chain ends on a supporting passage, train the 2-layer
feed-forward scorer with binary cross-entropy, and rank passages by the
max chain probability. Includes the finite-difference gradient check.

Run:  python demos/04_chains_and_reranker.py
"""

import numpy as np

from entityhop import (
    LexicalEncoder,
    Question,
    TrainConfig,
    build_index,
    corpus_from_passages,
    enumerate_chains,
    gold_label,
    gradient_check,
    rank_passages,
    retrieve,
    train,
)
from entityhop.corpus import heuristic_tag_mentions, Passage
from entityhop.linker import build_alias_table
from entityhop.reranker import FfnParams, build_chain_dataset

passages = [
    Passage("p_rh", "Rochester Hills", "Rochester Hills is a city in Oakland County."),
    Passage("p_oc", "Oakland County", "Oakland County is in Michigan with many lakes."),
    Passage("p_mum", "Mumbai", "Mumbai is a coastal city with busy markets."),
    Passage("p_x", "", "lakes and markets unrelated to the question here"),
]
corpus = corpus_from_passages([heuristic_tag_mentions(p) for p in passages])
index = build_index(corpus)
table = build_alias_table(corpus)

question = Question(
    qid="q1",
    text="which county is Rochester Hills part of",
    answer="Oakland County",
    supporting_ids=frozenset({"p_rh", "p_oc"}),
)

initial = retrieve(index, question.text, "bm25", k=3)
print("initial BM25 set:", [pid for pid, _ in initial])

chain_set = enumerate_chains(initial, corpus, table, qid=question.qid)
print("\nchains (self-links + mention hops):")
for c in chain_set.chains:
    hop = "self-link" if c.is_self_link else f"via {c.via.surface!r}"
    print(f"  ({c.first} -> {c.last})  {hop:22s} label={'+' if gold_label(c, question) else '-'}")

# Train on this one question's chains (toy-sized, lexical features).
encoder = LexicalEncoder(index)
samples = build_chain_dataset([question], {question.qid: chain_set}, corpus, encoder)
params, losses = train(samples, TrainConfig(epochs=150, seed=7, neg_per_pos=0))
print(f"\ntrained {len(samples)} samples: loss {losses[0]:.4f} -> {losses[-1]:.4f}")

ranked = rank_passages(params, encoder, question, chain_set, corpus, k=4)
print("passage ranking (max chain probability per passage):")
for pid, prob in ranked:
    marker = "*" if pid in question.supporting_ids else " "
    print(f"  {prob:6.4f} {marker} {pid}")

# The backprop is hand-rolled; verify it against central finite differences.
rng = np.random.default_rng(0)
check = FfnParams(
    w1=rng.normal(size=(4, 16)), b1=rng.normal(size=4), w2=rng.normal(size=4), b2=0.1
)
err = gradient_check(check, rng.normal(size=16), y=1)
print(f"\ngradient check vs finite differences: max relative error {err:.2e}")
