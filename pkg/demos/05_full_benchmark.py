"""End-to-end comparison on a synthetic bridge-entity benchmark: generate
a corpus where two-hop questions share few terms with their answer
passage, then race BM25, both PRF baselines, and the trained entity-hop
pipeline under the strict all-supporting-passages metrics.

A smaller sibling of the acceptance-suite run; finishes in ~15 s.

Run:  python demos/05_full_benchmark.py
"""

import time

from entityhop import (
    LexicalEncoder,
    SynthConfig,
    TrainConfig,
    build_alias_table,
    build_index,
    corpus_from_passages,
    evaluate,
    generate,
    train,
)
from entityhop.evaluation import format_report_markdown, report_rows
from entityhop.pipeline import (
    bm25_rankings,
    build_question_chains,
    entity_hop_rankings,
    rm3_rankings,
    rocchio_rankings,
)
from entityhop.reranker import build_chain_dataset

t0 = time.time()
config = SynthConfig(
    n_entities=600, n_distractors=400, n_questions=100,
    vocab_size=360, overlap=0.3, seed=2,
)
bundle = generate(config)
corpus = corpus_from_passages(bundle.passages)
index = build_index(corpus)
table = build_alias_table(corpus, bundle.links)
print(f"bundle: {len(bundle.passages)} passages, {len(bundle.questions)} two-hop questions "
      f"(answer passage shares ~{config.overlap:.0%} of question terms)")

train_qs, eval_qs = bundle.questions[:50], bundle.questions[50:]
encoder = LexicalEncoder(index)
chains_train = build_question_chains(index, corpus, table, train_qs, initial_k=25)
chains_eval = build_question_chains(index, corpus, table, eval_qs, initial_k=25)

samples = build_chain_dataset(train_qs, chains_train, corpus, encoder)
params, losses = train(samples, TrainConfig(epochs=200, seed=3))
print(f"trained on {len(samples)} chains from {len(train_qs)} questions; "
      f"loss {losses[0]:.3f} -> {losses[-1]:.3f}")

systems = [
    ("bm25", evaluate(bm25_rankings(index, eval_qs, 100), eval_qs)),
    ("prf-rocchio", evaluate(rocchio_rankings(index, eval_qs, 100), eval_qs)),
    ("prf-rm3", evaluate(rm3_rankings(index, eval_qs, 100), eval_qs)),
    (
        "entity-hop",
        evaluate(entity_hop_rankings(params, encoder, corpus, eval_qs, chains_eval, 100), eval_qs),
    ),
]

print(f"\nheld-out evaluation ({len(eval_qs)} questions, all supporting passages required):\n")
print(format_report_markdown(report_rows(systems)))
print(f"total {time.time() - t0:.1f}s")
