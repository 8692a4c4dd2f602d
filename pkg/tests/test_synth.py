"""Synthetic bridge-entity benchmark generator."""

import pytest

from entityhop.corpus import corpus_from_passages, tokenize
from entityhop.errors import DataError
from entityhop.evaluation import MULTI_HOP, SINGLE_HOP, accuracy_at_k, classify_hop
from entityhop.index import build_index, retrieve
from entityhop.linker import build_alias_table, link
from entityhop.synth import SynthConfig, generate, write_bundle


def small_config(**overrides):
    base = dict(
        n_entities=60, n_distractors=30, n_questions=20, vocab_size=80,
        overlap=0.3, single_hop_fraction=0.0, seed=11,
    )
    base.update(overrides)
    return SynthConfig(**base)


class TestGenerate:
    def test_counts_and_formats(self):
        bundle = generate(small_config())
        assert len(bundle.passages) == 90
        assert len(bundle.questions) == 20
        corpus = corpus_from_passages(bundle.passages)  # validates spans
        assert all(q.supporting_ids <= set(corpus.passages) for q in bundle.questions)

    def test_single_hop_answer_in_supporting(self):
        bundle = generate(small_config(n_questions=1, single_hop_fraction=1.0))
        q = bundle.questions[0]
        (pid,) = q.supporting_ids
        passage = next(p for p in bundle.passages if p.id == pid)
        assert q.answer in tokenize(passage.text)

    def test_two_hop_structure(self):
        bundle = generate(small_config())
        corpus = corpus_from_passages(bundle.passages)
        for q in bundle.questions:
            info = bundle.manifest["planted"][q.qid]
            assert info["type"] == "two_hop"
            assert q.supporting_ids == {info["source"], info["target"]}
            # bridge mentioned in the source passage, titles the target
            source = corpus.get(info["source"])
            assert info["bridge"] in [m.surface for m in source.mentions]
            assert corpus.get(info["target"]).title == info["bridge"]
            # answer token lives only in the target passage
            holders = [p.id for p in corpus if q.answer in tokenize(p.text)]
            assert holders == [info["target"]]

    def test_zero_overlap_shares_no_content_terms(self):
        bundle = generate(small_config(overlap=0.0))
        corpus = corpus_from_passages(bundle.passages)
        for q in bundle.questions:
            target = bundle.manifest["planted"][q.qid]["target"]
            shared = set(tokenize(q.text)) & set(tokenize(corpus.get(target).text))
            assert shared == set()

    def test_planted_chain_is_linked(self):
        bundle = generate(small_config())
        corpus = corpus_from_passages(bundle.passages)
        table = build_alias_table(corpus, bundle.links)
        for q in bundle.questions:
            info = bundle.manifest["planted"][q.qid]
            source = corpus.get(info["source"])
            bridge_mentions = [m for m in source.mentions if m.surface == info["bridge"]]
            assert bridge_mentions
            assert info["target"] in link(table, bridge_mentions[0])

    def test_classify_hop_agrees_with_intent(self):
        bundle = generate(small_config(n_questions=40, single_hop_fraction=0.5))
        corpus = corpus_from_passages(bundle.passages)
        agree = 0
        for q in bundle.questions:
            intent = bundle.manifest["planted"][q.qid]["type"]
            got = classify_hop(q, corpus)
            want = SINGLE_HOP if intent == "single_hop" else MULTI_HOP
            agree += got == want
        assert agree / len(bundle.questions) >= 0.95

    def test_fixed_seed_byte_identical(self, tmp_path):
        cfg = small_config()
        a_dir, b_dir = tmp_path / "a", tmp_path / "b"
        write_bundle(generate(cfg), a_dir)
        write_bundle(generate(cfg), b_dir)
        for name in ("corpus.jsonl", "links.jsonl", "questions.jsonl", "manifest.json"):
            assert (a_dir / name).read_bytes() == (b_dir / name).read_bytes()

    def test_different_seed_differs(self):
        a = generate(small_config(seed=1))
        b = generate(small_config(seed=2))
        assert [q.text for q in a.questions] != [q.text for q in b.questions]

    def test_infeasible_config(self):
        with pytest.raises(DataError, match="infeasible"):
            generate(small_config(vocab_size=10, passage_len=30))


class TestBm25OverlapMonotonicity:
    def test_lower_overlap_degrades_bm25(self):
        # Mean BM25 acc@10 must strictly increase with the overlap level.
        levels = (0.0, 0.3, 0.7)
        seeds = (1, 2, 3, 4, 5)
        means = []
        for overlap in levels:
            accs = []
            for seed in seeds:
                bundle = generate(
                    SynthConfig(
                        n_entities=120, n_distractors=80, n_questions=25,
                        vocab_size=200, overlap=overlap, seed=seed,
                    )
                )
                corpus = corpus_from_passages(bundle.passages)
                index = build_index(corpus)
                for q in bundle.questions:
                    ranked = retrieve(index, q.text, "bm25", 10)
                    accs.append(accuracy_at_k(ranked, q.supporting_ids, 10))
            means.append(sum(accs) / len(accs))
        assert means[0] < means[1] < means[2], means
