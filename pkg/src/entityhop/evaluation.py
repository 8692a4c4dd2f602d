"""Strict multi-evidence retrieval metrics and comparison reports.

accuracy@k counts a question as retrieved only when ALL of its supporting
passages appear in the top k. Average precision penalizes unretrieved gold
(denominator is |gold|). Questions are also classifiable into single-hop
(answer span present in every supporting passage) vs multi-hop (present in
exactly one of several), using contiguous token-run containment on
normalized text so "art" never matches inside "part".
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .corpus import Corpus, Question, tokenize
from .errors import DataError
from .index import RankedList

K_VALUES = (2, 5, 10, 20)

SINGLE_HOP = "single_hop"
MULTI_HOP = "multi_hop"
UNCLASSIFIED = "unclassified"

# Published full-corpus HotpotQA results for these system families
# (5.23M-passage setting, deep pretrained encoder). Not reproducible at
# desk scale; reportable as reference rows for orientation only.
FULL_SCALE_REFERENCE: dict[str, dict[str, float]] = {
    "bm25": {"acc@2": 0.093, "acc@5": 0.191, "acc@10": 0.259, "acc@20": 0.324, "map": 0.412},
    "prf-tfidf": {"acc@2": 0.088, "acc@5": 0.157, "acc@10": 0.204, "acc@20": 0.258, "map": 0.317},
    "prf-rm": {"acc@2": 0.083, "acc@5": 0.175, "acc@10": 0.242, "acc@20": 0.296, "map": 0.406},
    "prf-task": {"acc@2": 0.097, "acc@5": 0.198, "acc@10": 0.267, "acc@20": 0.330, "map": 0.420},
    "pointwise-reranker": {
        "acc@2": 0.146,
        "acc@5": 0.271,
        "acc@10": 0.347,
        "acc@20": 0.409,
        "map": 0.470,
    },
    "query+e-doc": {"acc@2": 0.101, "acc@5": 0.223, "acc@10": 0.301, "acc@20": 0.367, "map": 0.568},
    "entity-hop": {"acc@2": 0.230, "acc@5": 0.482, "acc@10": 0.612, "acc@20": 0.674, "map": 0.654},
}


def accuracy_at_k(ranked: RankedList, gold: set[str] | frozenset[str], k: int) -> int:
    """1 iff every gold id is within the top k of the ranking."""
    if not gold:
        raise DataError("empty gold set")
    if k < 1:
        raise DataError(f"k must be >= 1, got {k}")
    top = {pid for pid, _ in ranked[:k]}
    return 1 if set(gold) <= top else 0


def average_precision(ranked: RankedList, gold: set[str] | frozenset[str]) -> float:
    """AP = (1/|gold|) * sum over ranks r with a gold hit of precision@r;
    unretrieved gold contribute 0."""
    if not gold:
        raise DataError("empty gold set")
    gold = set(gold)
    hits = 0
    total = 0.0
    for r, (pid, _) in enumerate(ranked, start=1):
        if pid in gold:
            hits += 1
            total += hits / r
    return total / len(gold)


@dataclass
class EvalResult:
    acc: dict[int, float]  # k -> mean accuracy@k
    map: float
    rows: list[dict] = field(default_factory=list)  # per-question detail

    def as_dict(self) -> dict[str, float]:
        out = {f"acc@{k}": self.acc[k] for k in sorted(self.acc)}
        out["map"] = self.map
        return out


def evaluate(
    outputs: dict[str, RankedList],
    questions: Sequence[Question],
    ks: Sequence[int] = K_VALUES,
) -> EvalResult:
    """Mean accuracy@k and MAP over a question set; order-invariant."""
    if not questions:
        raise DataError("no questions to evaluate")
    rows = []
    for q in questions:
        if q.qid not in outputs:
            raise DataError(f"missing ranking for qid {q.qid!r}")
        ranked = outputs[q.qid]
        row = {"qid": q.qid, "ap": average_precision(ranked, q.supporting_ids)}
        for k in ks:
            row[f"acc@{k}"] = accuracy_at_k(ranked, q.supporting_ids, k)
        rows.append(row)
    n = len(rows)
    acc = {k: sum(r[f"acc@{k}"] for r in rows) / n for k in ks}
    return EvalResult(acc=acc, map=sum(r["ap"] for r in rows) / n, rows=rows)


def _contains_token_run(haystack: list[str], needle: list[str]) -> bool:
    if not needle or len(needle) > len(haystack):
        return False
    first = needle[0]
    for i in range(len(haystack) - len(needle) + 1):
        if haystack[i] == first and haystack[i : i + len(needle)] == needle:
            return True
    return False


def classify_hop(question: Question, corpus: Corpus) -> str:
    """single_hop if the answer tokens occur in every supporting passage,
    multi_hop if in exactly one of several, unclassified otherwise."""
    answer = tokenize(question.answer)
    count = 0
    for pid in question.supporting_ids:
        if _contains_token_run(tokenize(corpus.get(pid).text), answer):
            count += 1
    n = len(question.supporting_ids)
    if n and count == n:
        return SINGLE_HOP
    if count == 1 and n > 1:
        return MULTI_HOP
    return UNCLASSIFIED


def split_by_hop_class(
    questions: Sequence[Question], corpus: Corpus
) -> dict[str, list[Question]]:
    out: dict[str, list[Question]] = {SINGLE_HOP: [], MULTI_HOP: [], UNCLASSIFIED: []}
    for q in questions:
        out[classify_hop(q, corpus)].append(q)
    return out


def report_rows(
    named: Sequence[tuple[str, EvalResult]],
    include_reference: bool = False,
    ks: Sequence[int] = K_VALUES,
) -> list[dict]:
    """One row per system, in input order; optional published full-scale
    reference rows appended last."""
    rows = []
    for name, result in named:
        row: dict = {"system": name, "scale": "desk"}
        row.update({f"acc@{k}": result.acc[k] for k in ks})
        row["map"] = result.map
        rows.append(row)
    if include_reference:
        for name, vals in FULL_SCALE_REFERENCE.items():
            row = {"system": name, "scale": "published-full-scale"}
            row.update(vals)
            rows.append(row)
    return rows


def write_report_csv(rows: list[dict], path: str | Path) -> None:
    if not rows:
        raise DataError("empty report")
    fields = list(rows[0].keys())
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        for row in rows:
            writer.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})


def write_report_json(rows: list[dict], path: str | Path) -> None:
    Path(path).write_text(json.dumps(rows, indent=1, sort_keys=True) + "\n", encoding="utf-8")


def format_report_markdown(rows: list[dict], ks: Sequence[int] = K_VALUES) -> str:
    headers = ["system", "scale"] + [f"acc@{k}" for k in ks] + ["map"]
    lines = ["| " + " | ".join(headers) + " |", "|" + "---|" * len(headers)]
    for row in rows:
        cells = [str(row["system"]), str(row["scale"])]
        cells += [f"{row[h]:.3f}" for h in headers[2:]]
        lines.append("| " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"
