"""Alias-table entity linking.

The alias table maps a normalized mention surface (e.g. "bill") to the
passages describing entities it may refer to, ordered by descending link
count then ascending passage id. It is built from explicit link
annotations plus (optionally) each passage's own title, with a build-time
exclusion set so that evaluation-query retrieval results cannot leak into
the table. Lookup is exact on the normalized surface; there is no fuzzy
matching.

Two extra modes serve corpora without link data: first-mention
descriptions (a passage describes the entity of its first mention) and
plain string-match linking against that map.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .corpus import Corpus, MentionSpan, Question, tokenize
from .errors import DataError
from .index import Bm25Params, InvertedIndex, retrieve


def normalize_surface(surface: str) -> str:
    """Lowercase, strip punctuation, collapse whitespace."""
    return " ".join(tokenize(surface))


@dataclass(frozen=True)
class LinkAnnotation:
    source: str
    start: int
    end: int
    surface: str
    target: str


@dataclass
class AliasTable:
    entries: dict[str, tuple[str, ...]]
    excluded: frozenset[str] = frozenset()
    skipped_dangling: int = 0

    def candidates(self, surface: str) -> tuple[str, ...]:
        return self.entries.get(normalize_surface(surface), ())

    def __len__(self) -> int:
        return len(self.entries)


def load_links(path: str | Path) -> list[LinkAnnotation]:
    """JSONL, one object per line:
    {"source", "start", "end", "surface", "target"}."""
    path = Path(path)
    out: list[LinkAnnotation] = []
    with path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            try:
                obj = json.loads(line)
                out.append(
                    LinkAnnotation(
                        source=str(obj["source"]),
                        start=int(obj["start"]),
                        end=int(obj["end"]),
                        surface=str(obj["surface"]),
                        target=str(obj["target"]),
                    )
                )
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise DataError(f"{path.name} line {lineno}: {exc!r}") from exc
    return out


def build_alias_table(
    corpus: Corpus,
    links: Iterable[LinkAnnotation] = (),
    exclude: frozenset[str] | set[str] = frozenset(),
    include_titles: bool = True,
) -> AliasTable:
    """Candidates ordered by descending link count, then ascending id.

    Targets in the exclusion set are dropped. Dangling links (target or
    source not in the corpus) are skipped and counted, not fatal. With
    include_titles, each passage's own normalized title maps to it with
    the weight of one link.
    """
    counts: dict[str, Counter[str]] = {}
    skipped = 0
    for ln in links:
        if ln.target not in corpus or ln.source not in corpus:
            skipped += 1
            continue
        surface = normalize_surface(ln.surface)
        if not surface:
            continue
        counts.setdefault(surface, Counter())[ln.target] += 1
    if include_titles:
        for p in corpus:
            surface = normalize_surface(p.title)
            if surface:
                counts.setdefault(surface, Counter())[p.id] += 1
    exclude = frozenset(exclude)
    entries: dict[str, tuple[str, ...]] = {}
    for surface in sorted(counts):
        kept = [(pid, c) for pid, c in counts[surface].items() if pid not in exclude]
        if kept:
            kept.sort(key=lambda pc: (-pc[1], pc[0]))
            entries[surface] = tuple(pid for pid, _ in kept)
    return AliasTable(entries=entries, excluded=exclude, skipped_dangling=skipped)


def build_exclusion_set(
    index: InvertedIndex,
    questions: Sequence[Question],
    top_n: int = 40,
    params: Bm25Params = Bm25Params(),
) -> frozenset[str]:
    """Union of top-n BM25 results over the given (dev/test) questions."""
    out: set[str] = set()
    for q in questions:
        out.update(pid for pid, _ in retrieve(index, q.text, "bm25", top_n, params))
    return frozenset(out)


def link(table: AliasTable, mention: MentionSpan) -> list[str]:
    """Exact lookup on the normalized surface; unknown surface -> []."""
    return list(table.candidates(mention.surface))


def first_mention_descriptions(corpus: Corpus) -> dict[str, str]:
    """Map each passage's first mention surface to that passage; conflicts
    resolve to the lowest passage id. Mention-free passages contribute
    nothing."""
    out: dict[str, str] = {}
    for p in corpus:
        if not p.mentions:
            continue
        surface = normalize_surface(p.mentions[0].surface)
        if not surface:
            continue
        if surface not in out or p.id < out[surface]:
            out[surface] = p.id
    return out


def string_match_link(descriptions: dict[str, str], mention: MentionSpan) -> list[str]:
    """Exact normalized-string lookup against a descriptions map."""
    pid = descriptions.get(normalize_surface(mention.surface))
    return [pid] if pid is not None else []


def save_alias_table(table: AliasTable, path: str | Path) -> None:
    """Sorted JSON, stable across runs, suitable for diffing."""
    obj = {
        "version": 1,
        "excluded": sorted(table.excluded),
        "skipped_dangling": table.skipped_dangling,
        "entries": {s: list(ids) for s, ids in sorted(table.entries.items())},
    }
    Path(path).write_text(json.dumps(obj, sort_keys=True, indent=1) + "\n", encoding="utf-8")


def load_alias_table(path: str | Path) -> AliasTable:
    obj = json.loads(Path(path).read_text(encoding="utf-8"))
    if obj.get("version") != 1:
        raise DataError(f"{path}: unsupported alias table version {obj.get('version')}")
    return AliasTable(
        entries={s: tuple(ids) for s, ids in obj["entries"].items()},
        excluded=frozenset(obj.get("excluded", ())),
        skipped_dangling=int(obj.get("skipped_dangling", 0)),
    )
