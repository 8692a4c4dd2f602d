"""Length-2 evidence chains.

For every passage D in an initial ranking: a self-link (D, D), plus
(D, E) for every alias-table candidate E of every mention in D. Mention
hops landing back on D collapse into the self-link, and duplicate
(first, last) pairs keep only the earliest occurrence. Enumeration order
is initial rank, then mention order, then candidate order, so caps apply
deterministically.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .corpus import Corpus, MentionSpan, Question
from .index import RankedList
from .linker import AliasTable, link


@dataclass(frozen=True)
class ChainCaps:
    per_mention: int = 8  # max candidates considered per mention
    per_question: int = 4096  # max chains kept per question


@dataclass(frozen=True)
class Chain:
    first: str
    last: str
    via: MentionSpan | None = None  # None marks a self-link

    @property
    def is_self_link(self) -> bool:
        return self.via is None


@dataclass
class ChainSet:
    qid: str
    chains: list[Chain]
    initial_k: int
    linker_mode: str = "alias"


def enumerate_chains(
    initial: RankedList,
    corpus: Corpus,
    table: AliasTable,
    caps: ChainCaps = ChainCaps(),
    qid: str = "",
    linker_mode: str = "alias",
) -> ChainSet:
    """Self-links come before a passage's mention hops; a passage with no
    mentions yields only its self-link."""
    chains: list[Chain] = []
    seen: set[tuple[str, str]] = set()

    def add(chain: Chain) -> bool:
        key = (chain.first, chain.last)
        if key in seen:
            return True
        if len(chains) >= caps.per_question:
            return False
        seen.add(key)
        chains.append(chain)
        return True

    for pid, _ in initial:
        if not add(Chain(first=pid, last=pid)):
            break
        passage = corpus.get(pid)
        for mention in passage.mentions:
            for candidate in link(table, mention)[: caps.per_mention]:
                if candidate == pid:
                    continue  # collapses into the self-link
                if not add(Chain(first=pid, last=candidate, via=mention)):
                    break
    return ChainSet(qid=qid, chains=chains, initial_k=len(initial), linker_mode=linker_mode)


def gold_label(chain: Chain, question: Question) -> bool:
    """Positive iff the chain's last passage is a supporting passage."""
    return chain.last in question.supporting_ids


def write_chain_sets(
    chain_sets: Iterable[tuple[ChainSet, Question | None]], path: str | Path
) -> None:
    """Dump chains as JSONL for training-data inspection:
    {"qid", "first", "last", "hop", "label"}; hop is null for self-links."""
    with Path(path).open("w", encoding="utf-8") as fh:
        for cs, question in chain_sets:
            for c in cs.chains:
                hop = None
                if c.via is not None:
                    hop = {"surface": c.via.surface, "start": c.via.start, "end": c.via.end}
                row = {"qid": cs.qid, "first": c.first, "last": c.last, "hop": hop}
                if question is not None:
                    row["label"] = int(gold_label(c, question))
                fh.write(json.dumps(row, ensure_ascii=False, separators=(",", ":")) + "\n")
