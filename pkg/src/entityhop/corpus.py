"""Passage and question data model, JSONL ingestion, tokenization, and a
capitalization-run fallback mention tagger.

Corpora are immutable after ingestion and safe for concurrent reads.
"""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Iterator

from .errors import DataError

# Alphanumeric runs; underscore splits like any other punctuation.
_WORD_RE = re.compile(r"[^\W_]+")

# Small English list. Applied only where an operation explicitly calls for
# stopwords (the mention tagger); never during tokenization or indexing.
DEFAULT_STOPWORDS = frozenset(
    """
    a an and are as at be but by for from had has have he her hers him his i
    in into is it its me my not of on or our she so that the their them they
    this to was we were what when where which who will with you your
    """.split()
)

# Characters allowed inside a capitalized run without breaking it.
_RUN_GAP_OK = set(" \t'’-")
_SENTENCE_END = set(".!?")


@dataclass(frozen=True)
class TokenizerConfig:
    """Tokenization is fixed (Unicode lowercase, split on non-alphanumeric,
    no stemming); only the stopword list is configurable."""

    stopwords: frozenset[str] = DEFAULT_STOPWORDS


def tokenize(text: str) -> list[str]:
    """Lowercased alphanumeric token stream. Deterministic; "" -> []."""
    return _WORD_RE.findall(text.lower())


@dataclass(frozen=True)
class MentionSpan:
    """A mention span over raw passage text, offsets in code points,
    end exclusive. surface == text[start:end] always holds."""

    start: int
    end: int
    surface: str


@dataclass(frozen=True)
class Passage:
    id: str
    title: str
    text: str
    mentions: tuple[MentionSpan, ...] = ()


@dataclass(frozen=True)
class Question:
    qid: str
    text: str
    answer: str
    supporting_ids: frozenset[str]


@dataclass
class Corpus:
    """Id-indexed passages plus collection statistics (sum of per-term
    frequencies always equals total_tokens)."""

    passages: dict[str, Passage]
    total_tokens: int
    collection_freq: dict[str, int]
    config: TokenizerConfig = field(default_factory=TokenizerConfig)

    def __len__(self) -> int:
        return len(self.passages)

    def __contains__(self, pid: str) -> bool:
        return pid in self.passages

    def __iter__(self) -> Iterator[Passage]:
        return iter(self.passages.values())

    def get(self, pid: str) -> Passage:
        try:
            return self.passages[pid]
        except KeyError:
            raise KeyError(f"unknown passage id: {pid!r}") from None


def _validate_mentions(pid: str, text: str, raw: list[MentionSpan]) -> tuple[MentionSpan, ...]:
    for m in raw:
        if not (0 <= m.start < m.end <= len(text)):
            raise DataError(
                f"passage {pid!r}: mention span [{m.start},{m.end}) out of bounds "
                f"for text of length {len(text)}"
            )
        if text[m.start : m.end] != m.surface:
            raise DataError(
                f"passage {pid!r}: mention surface {m.surface!r} does not match "
                f"text[{m.start}:{m.end}] = {text[m.start:m.end]!r}"
            )
    # Overlaps are resolved by keeping the longest span, then the earliest.
    kept: list[MentionSpan] = []
    for m in sorted(raw, key=lambda m: (-(m.end - m.start), m.start)):
        if all(m.end <= k.start or m.start >= k.end for k in kept):
            kept.append(m)
    return tuple(sorted(kept, key=lambda m: m.start))


def _parse_mention(obj: dict) -> MentionSpan:
    return MentionSpan(start=int(obj["start"]), end=int(obj["end"]), surface=str(obj["surface"]))


def corpus_from_passages(
    passages: Iterable[Passage], config: TokenizerConfig | None = None
) -> Corpus:
    """Assemble a Corpus, validating id uniqueness and mention spans and
    computing collection statistics."""
    config = config or TokenizerConfig()
    by_id: dict[str, Passage] = {}
    freq: Counter[str] = Counter()
    total = 0
    for p in passages:
        if not p.id:
            raise DataError("passage with empty id")
        if p.id in by_id:
            raise DataError(f"duplicate passage id: {p.id!r}")
        mentions = _validate_mentions(p.id, p.text, list(p.mentions))
        by_id[p.id] = replace(p, mentions=mentions)
        toks = tokenize(p.text)
        freq.update(toks)
        total += len(toks)
    return Corpus(passages=by_id, total_tokens=total, collection_freq=dict(freq), config=config)


def ingest_corpus(path: str | Path, config: TokenizerConfig | None = None) -> Corpus:
    """Load a corpus from a JSONL file, one passage object per line:
    {"id", "title", "text", "mentions": [{"start","end","surface"}, ...]}
    with "mentions" optional.

    Raises DataError naming the offending line number, passage id, or
    duplicate id.
    """
    path = Path(path)
    passages: list[Passage] = []
    with path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataError(f"{path.name} line {lineno}: invalid JSON ({exc.msg})") from exc
            if not isinstance(obj, dict):
                raise DataError(f"{path.name} line {lineno}: expected a JSON object")
            try:
                mentions = tuple(_parse_mention(m) for m in obj.get("mentions", []))
                passages.append(
                    Passage(
                        id=str(obj["id"]),
                        title=str(obj["title"]),
                        text=str(obj["text"]),
                        mentions=mentions,
                    )
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise DataError(f"{path.name} line {lineno}: {exc!r}") from exc
    return corpus_from_passages(passages, config)


def write_corpus(corpus: Corpus, path: str | Path) -> None:
    """Serialize back to the JSONL line format; re-ingesting the output
    yields an identical corpus (round-trip)."""
    with Path(path).open("w", encoding="utf-8") as fh:
        for p in corpus:
            obj = {
                "id": p.id,
                "title": p.title,
                "text": p.text,
                "mentions": [
                    {"start": m.start, "end": m.end, "surface": m.surface} for m in p.mentions
                ],
            }
            fh.write(json.dumps(obj, ensure_ascii=False, separators=(",", ":")) + "\n")


def load_questions(path: str | Path) -> list[Question]:
    """Load questions from JSONL: {"qid", "question", "answer",
    "supporting_ids"}."""
    path = Path(path)
    out: list[Question] = []
    seen: set[str] = set()
    with path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataError(f"{path.name} line {lineno}: invalid JSON ({exc.msg})") from exc
            try:
                q = Question(
                    qid=str(obj["qid"]),
                    text=str(obj["question"]),
                    answer=str(obj["answer"]),
                    supporting_ids=frozenset(str(s) for s in obj["supporting_ids"]),
                )
            except (KeyError, TypeError) as exc:
                raise DataError(f"{path.name} line {lineno}: {exc!r}") from exc
            if q.qid in seen:
                raise DataError(f"{path.name} line {lineno}: duplicate qid {q.qid!r}")
            seen.add(q.qid)
            out.append(q)
    return out


def write_questions(questions: Iterable[Question], path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for q in questions:
            obj = {
                "qid": q.qid,
                "question": q.text,
                "answer": q.answer,
                "supporting_ids": sorted(q.supporting_ids),
            }
            fh.write(json.dumps(obj, ensure_ascii=False, separators=(",", ":")) + "\n")


def heuristic_tag_mentions(
    passage: Passage, stopwords: frozenset[str] = DEFAULT_STOPWORDS
) -> Passage:
    """Tag maximal runs of capitalized tokens as mentions.

    A sentence-initial capitalized token is tagged unless its lowercase form
    is a stopword (erring toward recall). Runs extend across whitespace,
    hyphens, and apostrophes only, and never across sentence boundaries.
    Output spans are non-overlapping and in document order.
    """
    text = passage.text
    words = list(_WORD_RE.finditer(text))

    def sentence_initial(i: int) -> bool:
        if i == 0:
            return True
        gap = text[words[i - 1].end() : words[i].start()]
        return any(ch in _SENTENCE_END for ch in gap)

    mentions: list[MentionSpan] = []
    run: list[re.Match[str]] = []

    def flush() -> None:
        if run:
            start, end = run[0].start(), run[-1].end()
            mentions.append(MentionSpan(start=start, end=end, surface=text[start:end]))
            run.clear()

    for i, w in enumerate(words):
        token = w.group()
        capitalized = token[:1].isupper()
        eligible = capitalized and not (sentence_initial(i) and token.lower() in stopwords)
        if eligible and run:
            gap = text[run[-1].end() : w.start()]
            if sentence_initial(i) or any(ch not in _RUN_GAP_OK for ch in gap):
                flush()
        if eligible:
            run.append(w)
        else:
            flush()
    flush()
    return replace(passage, mentions=tuple(mentions))
