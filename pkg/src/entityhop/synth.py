"""Synthetic bridge-entity corpora with two-hop questions.

Every entity gets one describing passage: the entity name is the title and
the first text token, a unique answer token is buried mid-passage, and a
few other entities are mentioned (with link annotations), forming the hop
graph. Distractor passages reuse the same filler vocabulary to confound
term-frequency retrieval.

A two-hop question asks about the answer token of a bridge entity B
mentioned in a source passage S: the question names S, draws most of its
terms from S, and shares exactly the configured overlap fraction of its
terms with B's passage - sampling is arranged so the shared-term count is
exact, which makes overlap=0 questions provably disjoint from their answer
passage. Supporting passages are {S's passage, B's passage} and the answer
token occurs only in B's passage. Single-hop questions are built from one
passage and answered inside it.

Generation is single-threaded and byte-identical per seed.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import MentionSpan, Passage, Question
from .errors import DataError
from .linker import LinkAnnotation

_CONSONANTS = "bdfgklmnprstvz"
_VOWELS = "aeiou"
_SYLLABLES = [c + v for c in _CONSONANTS for v in _VOWELS]  # 70
_MAX_WORDS = len(_SYLLABLES) ** 3  # 343000 distinct 3-syllable words


@dataclass(frozen=True)
class SynthConfig:
    n_entities: int = 200
    n_distractors: int = 100
    n_questions: int = 50
    vocab_size: int = 150  # filler word types
    overlap: float = 0.3  # fraction of question terms shared with the answer passage
    single_hop_fraction: float = 0.0
    seed: int = 1
    passage_len: int = 30  # filler tokens per passage
    question_len: int = 12  # content tokens per question
    mentions_per_passage: int = 3


@dataclass
class SynthBundle:
    passages: list[Passage]
    links: list[LinkAnnotation]
    questions: list[Question]
    manifest: dict = field(default_factory=dict)


def _word(i: int) -> str:
    """Deterministic pronounceable nonsense word for a global index."""
    a, rest = i % len(_SYLLABLES), i // len(_SYLLABLES)
    b, c = rest % len(_SYLLABLES), rest // len(_SYLLABLES)
    return _SYLLABLES[a] + _SYLLABLES[b] + _SYLLABLES[c]


def _assemble(tokens: list[str], mention_flags: list[bool]) -> tuple[str, list[MentionSpan]]:
    text_parts: list[str] = []
    mentions: list[MentionSpan] = []
    pos = 0
    for tok, flagged in zip(tokens, mention_flags):
        if text_parts:
            text_parts.append(" ")
            pos += 1
        start = pos
        text_parts.append(tok)
        pos += len(tok)
        if flagged:
            mentions.append(MentionSpan(start=start, end=pos, surface=tok))
    return "".join(text_parts), mentions


def generate(config: SynthConfig) -> SynthBundle:
    """Emit passages, link annotations, questions, and a manifest recording
    the planted gold for oracle checks."""
    if min(config.n_entities, config.n_questions, config.vocab_size) < 1:
        raise DataError("n_entities, n_questions, and vocab_size must be >= 1")
    if config.n_distractors < 0:
        raise DataError("n_distractors must be >= 0")
    if not 0.0 <= config.overlap <= 1.0:
        raise DataError("overlap must be in [0, 1]")
    if not 0.0 <= config.single_hop_fraction <= 1.0:
        raise DataError("single_hop_fraction must be in [0, 1]")

    n_ent, n_dis = config.n_entities, config.n_distractors
    # Disjoint index ranges: filler | answers | entity names | distractor titles.
    needed = config.vocab_size + 2 * n_ent + n_dis
    if needed > _MAX_WORDS:
        raise DataError(
            f"infeasible config: needs {needed} distinct words, generator has {_MAX_WORDS}"
        )
    filler = [_word(i) for i in range(config.vocab_size)]
    answers = [_word(config.vocab_size + i) for i in range(n_ent)]
    names = [_word(config.vocab_size + n_ent + i).capitalize() for i in range(n_ent)]
    dis_titles = [_word(config.vocab_size + 2 * n_ent + i) for i in range(n_dis)]

    if config.passage_len > config.vocab_size:
        raise DataError("infeasible config: passage_len exceeds vocab_size")

    rng = random.Random(config.seed)
    filler_set = set(filler)
    name_to_idx = {name: i for i, name in enumerate(names)}
    passages: list[Passage] = []
    links: list[LinkAnnotation] = []
    out_mentions: list[list[int]] = []  # entity index -> mentioned entity indices

    for i in range(n_ent):
        pid = f"e{i:05d}"
        others = [j for j in (rng.randrange(n_ent) for _ in range(config.mentions_per_passage * 3)) if j != i]
        mentioned = sorted(set(others))[: config.mentions_per_passage]
        out_mentions.append(mentioned)
        body = rng.sample(filler, config.passage_len)
        cut = len(body) // 3
        tokens = [names[i]] + body[:cut] + [answers[i]] + body[cut:]
        flags = [True] + [False] * (len(tokens) - 1)
        for j in mentioned:
            tokens.append(names[j])
            flags.append(True)
        text, mentions = _assemble(tokens, flags)
        passages.append(Passage(id=pid, title=names[i], text=text, mentions=tuple(mentions)))
        # Link every mention of another entity to its describing passage.
        for m in mentions[1:]:
            target_idx = name_to_idx[m.surface]
            links.append(
                LinkAnnotation(
                    source=pid, start=m.start, end=m.end, surface=m.surface,
                    target=f"e{target_idx:05d}",
                )
            )

    for i in range(n_dis):
        pid = f"d{i:05d}"
        mentioned = sorted({rng.randrange(n_ent) for _ in range(2)})
        tokens = rng.sample(filler, config.passage_len)
        flags = [False] * len(tokens)
        for j in mentioned:
            tokens.append(names[j])
            flags.append(True)
        text, mentions = _assemble(tokens, flags)
        passages.append(Passage(id=pid, title=dis_titles[i], text=text, mentions=tuple(mentions)))
        for m in mentions:
            target_idx = name_to_idx[m.surface]
            links.append(
                LinkAnnotation(
                    source=pid, start=m.start, end=m.end, surface=m.surface,
                    target=f"e{target_idx:05d}",
                )
            )

    passage_tokens = {p.id: set(p.text.lower().split()) for p in passages}

    n_single = round(config.single_hop_fraction * config.n_questions)
    # Interleave types so any contiguous split keeps both kinds.
    type_plan = [True] * n_single + [False] * (config.n_questions - n_single)
    rng.shuffle(type_plan)
    questions: list[Question] = []
    planted: dict[str, dict] = {}
    q_index = 0
    attempts = 0
    while len(questions) < config.n_questions:
        attempts += 1
        if attempts > 200 * config.n_questions:
            raise DataError(
                "infeasible config: could not place questions "
                "(vocabulary too small for the requested distinctness)"
            )
        single = type_plan[len(questions)]
        if single:
            e = rng.randrange(n_ent)
            pid = f"e{e:05d}"
            pool = sorted(passage_tokens[pid] & filler_set)
            want = min(config.question_len - 1, len(pool))
            terms = [names[e].lower()] + rng.sample(pool, want)
            rng.shuffle(terms)
            qid = f"q{q_index:05d}"
            questions.append(
                Question(
                    qid=qid, text=" ".join(terms), answer=answers[e],
                    supporting_ids=frozenset({pid}),
                )
            )
            planted[qid] = {"type": "single_hop", "source": pid, "answer": answers[e]}
            q_index += 1
            continue

        s = rng.randrange(n_ent)
        if not out_mentions[s]:
            continue
        b = rng.choice(out_mentions[s])
        s_pid, b_pid = f"e{s:05d}", f"e{b:05d}"
        if names[s].lower() in passage_tokens[b_pid]:
            continue  # source name leaking into the answer passage breaks overlap control
        n_shared = round(config.overlap * config.question_len)
        n_source = config.question_len - 1 - n_shared
        source_pool = sorted(
            (passage_tokens[s_pid] & filler_set) - passage_tokens[b_pid]
        )
        bridge_pool = sorted(passage_tokens[b_pid] & filler_set)
        if len(source_pool) < n_source or len(bridge_pool) < n_shared:
            continue
        terms = (
            [names[s].lower()]
            + rng.sample(source_pool, n_source)
            + rng.sample(bridge_pool, n_shared)
        )
        rng.shuffle(terms)
        qid = f"q{q_index:05d}"
        questions.append(
            Question(
                qid=qid, text=" ".join(terms), answer=answers[b],
                supporting_ids=frozenset({s_pid, b_pid}),
            )
        )
        planted[qid] = {
            "type": "two_hop", "source": s_pid, "bridge": names[b],
            "target": b_pid, "answer": answers[b], "shared_terms": n_shared,
        }
        q_index += 1

    manifest = {
        "config": {
            "n_entities": config.n_entities,
            "n_distractors": config.n_distractors,
            "n_questions": config.n_questions,
            "vocab_size": config.vocab_size,
            "overlap": config.overlap,
            "single_hop_fraction": config.single_hop_fraction,
            "seed": config.seed,
            "passage_len": config.passage_len,
            "question_len": config.question_len,
            "mentions_per_passage": config.mentions_per_passage,
        },
        "planted": planted,
    }
    return SynthBundle(passages=passages, links=links, questions=questions, manifest=manifest)


def write_bundle(bundle: SynthBundle, out_dir: str | Path) -> dict[str, Path]:
    """Write corpus.jsonl / links.jsonl / questions.jsonl / manifest.json;
    byte-identical for identical bundles."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "corpus": out / "corpus.jsonl",
        "links": out / "links.jsonl",
        "questions": out / "questions.jsonl",
        "manifest": out / "manifest.json",
    }
    with paths["corpus"].open("w", encoding="utf-8") as fh:
        for p in bundle.passages:
            obj = {
                "id": p.id, "title": p.title, "text": p.text,
                "mentions": [{"start": m.start, "end": m.end, "surface": m.surface} for m in p.mentions],
            }
            fh.write(json.dumps(obj, ensure_ascii=False, separators=(",", ":")) + "\n")
    with paths["links"].open("w", encoding="utf-8") as fh:
        for ln in bundle.links:
            obj = {
                "source": ln.source, "start": ln.start, "end": ln.end,
                "surface": ln.surface, "target": ln.target,
            }
            fh.write(json.dumps(obj, ensure_ascii=False, separators=(",", ":")) + "\n")
    with paths["questions"].open("w", encoding="utf-8") as fh:
        for q in bundle.questions:
            obj = {
                "qid": q.qid, "question": q.text, "answer": q.answer,
                "supporting_ids": sorted(q.supporting_ids),
            }
            fh.write(json.dumps(obj, ensure_ascii=False, separators=(",", ":")) + "\n")
    paths["manifest"].write_text(
        json.dumps(bundle.manifest, indent=1, sort_keys=True) + "\n", encoding="utf-8"
    )
    return paths
