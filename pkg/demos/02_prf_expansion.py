"""Pseudo-relevance feedback: Rocchio over TF-IDF and RM3 over the
language-modeling framework, each expanding the query from its own
first pass and re-retrieving in its native space.

Run:  python demos/02_prf_expansion.py
"""

from entityhop import (
    Passage,
    Rm3Params,
    RocchioParams,
    build_index,
    corpus_from_passages,
    retrieve,
    retrieve_weighted,
    rm3_expand,
    rocchio_expand,
    tfidf_vector,
)

corpus = corpus_from_passages(
    [
        Passage("p1", "", "solar panels convert sunlight into electricity"),
        Passage("p2", "", "photovoltaic cells and solar panels on rooftops"),
        Passage("p3", "", "wind turbines also generate renewable electricity"),
        Passage("p4", "", "the history of coal mining in the region"),
        Passage("p5", "", "rooftop photovoltaic installation costs are falling"),
    ]
)
index = build_index(corpus)
query = "solar electricity"

print(f"query: {query!r}\n")

# Rocchio lives in TF-IDF space: cosine first pass, move the query vector
# toward the centroid of the top feedback documents.
first = retrieve_weighted(index, tfidf_vector(index, query), "tfidf-cosine", k=5)
print("tfidf-cosine first pass:", [pid for pid, _ in first])
wq = rocchio_expand(index, query, first, RocchioParams(fb_docs=3, fb_terms=4))
print("rocchio-expanded query:")
for term, weight in sorted(wq.items(), key=lambda kv: -kv[1]):
    print(f"  {weight:6.3f}  {term}")
print("second pass:", [pid for pid, _ in retrieve_weighted(index, wq, "tfidf-cosine", k=5)])

# RM3 lives in the LM framework: QL first pass, relevance model from the
# smoothed document models, interpolated with the query MLE. The output is
# a probability distribution (sums to 1).
first = retrieve(index, query, "ql", k=5)
print("\nql first pass:", [pid for pid, _ in first])
rm = rm3_expand(index, query, first, Rm3Params(lam=0.5, fb_docs=3, fb_terms=6))
print(f"rm3 model (sum = {sum(rm.values()):.9f}):")
for term, weight in sorted(rm.items(), key=lambda kv: -kv[1]):
    print(f"  {weight:6.4f}  {term}")
print("second pass:", [pid for pid, _ in retrieve_weighted(index, rm, "ql", k=5)])
