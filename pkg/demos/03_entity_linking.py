"""Entity linking via an alias table: ambiguous surfaces map to candidate
entity passages ordered by link count, evaluation-query leakage is
excluded at build time, and two fallback modes (first-mention
descriptions, plain string matching) serve corpora without link data.

Run:  python demos/03_entity_linking.py
"""

from entityhop import (
    LinkAnnotation,
    MentionSpan,
    Passage,
    Question,
    build_alias_table,
    build_exclusion_set,
    build_index,
    corpus_from_passages,
    first_mention_descriptions,
    heuristic_tag_mentions,
    link,
    string_match_link,
)

corpus = corpus_from_passages(
    [
        Passage("Bill_Clinton", "Bill Clinton", "Bill Clinton served as president."),
        Passage("Billy_Joel", "Billy Joel", "Billy Joel is a singer and pianist."),
        Passage("news1", "", "Bill spoke at the rally downtown yesterday."),
        Passage("news2", "", "Bill played piano at the benefit concert."),
    ]
)

links = [
    LinkAnnotation("news1", 0, 4, "Bill", "Bill_Clinton"),
    LinkAnnotation("news1", 0, 4, "Bill", "Bill_Clinton"),
    LinkAnnotation("news2", 0, 4, "Bill", "Billy_Joel"),
]

table = build_alias_table(corpus, links)
bill = MentionSpan(0, 4, "Bill")
print("candidates for mention 'Bill':", link(table, bill))
print("(ordered by link count, then id; titles map to themselves too)")

# Leakage control: passages a BM25 retriever surfaces for the evaluation
# questions are barred from ever becoming link targets.
index = build_index(corpus)
eval_qs = [
    Question("q1", "which Bill served as president", "Bill Clinton", frozenset({"Bill_Clinton"}))
]
exclude = build_exclusion_set(index, eval_qs, top_n=2)
print("\nexcluded ids (BM25 top-2 of the eval questions):", sorted(exclude))
strict = build_alias_table(corpus, links, exclude=exclude)
print("candidates for 'Bill' after exclusion:", link(strict, bill))

# Corpora without link annotations: describe each entity by the passage
# whose first mention names it, then link by exact string match.
tagged = corpus_from_passages([heuristic_tag_mentions(p) for p in corpus])
descriptions = first_mention_descriptions(tagged)
print("\nfirst-mention descriptions:", dict(sorted(descriptions.items())))
print("string match 'billy joel' ->", string_match_link(descriptions, MentionSpan(0, 10, "Billy Joel")))
print("string match 'xyzzy'      ->", string_match_link(descriptions, MentionSpan(0, 5, "Xyzzy")))
