"""First-pass retrieval on a tiny corpus: BM25 and Dirichlet-smoothed
query likelihood over an inverted index, plus the TF-IDF vectors the
Rocchio expander consumes.

Run:  python demos/01_index_and_scorers.py
"""

from entityhop import (
    Bm25Params,
    DirichletParams,
    Passage,
    bm25_score,
    build_index,
    corpus_from_passages,
    ql_dirichlet_score,
    retrieve,
    tfidf_vector,
    tokenize,
)

corpus = corpus_from_passages(
    [
        Passage("rochester", "Rochester Hills", "Rochester Hills is a city in Oakland County."),
        Passage("oakland", "Oakland County", "Oakland County lies in the state of Michigan."),
        Passage("mumbai", "Mumbai", "Mumbai is the most populous city in India."),
        Passage("india", "India", "India is a country in South Asia with many cities."),
    ]
)
index = build_index(corpus)
print(f"indexed {index.doc_count} passages, {len(index.postings)} terms, "
      f"avg length {index.avg_doc_len:.2f} tokens")

query = "which county is the city of Rochester Hills in"
print(f"\nquery: {query!r}")
print("tokens:", tokenize(query))

print("\nBM25 ranking (k1=1.2, b=0.75):")
for pid, score in retrieve(index, query, "bm25", k=4):
    print(f"  {score:7.4f}  {pid}")

print("\nquery-likelihood ranking (Dirichlet mu=1500):")
for pid, score in retrieve(index, query, "ql", k=4, params=DirichletParams(mu=1500)):
    print(f"  {score:9.4f}  {pid}")

# Per-document scores are plain functions, handy for feature engineering.
terms = tokenize(query)
print("\nper-document scores for the query:")
for pid in corpus.passages:
    b = bm25_score(index, terms, pid, Bm25Params())
    q = ql_dirichlet_score(index, terms, pid)
    print(f"  {pid:10s} bm25={b:7.4f}  ql={q:9.4f}")

print("\nTF-IDF vector of the query (terms unknown to the corpus are dropped):")
for term, weight in sorted(tfidf_vector(index, query).items(), key=lambda kv: -kv[1]):
    print(f"  {weight:6.4f}  {term}")
