"""Feed-forward chain scorer: forward pass, gradients, training, ranking."""

import math
import random

import numpy as np
import pytest

from entityhop.chains import Chain, ChainSet
from entityhop.corpus import Passage, Question, corpus_from_passages
from entityhop.encoder import LexicalEncoder
from entityhop.errors import DegenerateTrainingSetError
from entityhop.index import build_index
from entityhop.reranker import (
    FfnParams,
    TrainConfig,
    bce_gradients,
    bce_loss,
    ffn_logit,
    gradient_check,
    init_params,
    load_model,
    rank_passages,
    save_model,
    score_chain,
    score_entity_only,
    score_pointwise,
    sigmoid,
    train,
    zero_params,
)

# Hand-computed forward pass, frozen before implementation:
# z1 = W1 x + b1 = [-0.55, 0.2], h = [0, 0.2], logit = 0.7*0 - 1.1*0.2 + 0.25.
HAND_W1 = np.array([[0.1, -0.2, 0.3, 0.0], [-0.5, 0.4, 0.1, 0.2]])
HAND_B1 = np.array([0.05, -0.1])
HAND_W2 = np.array([0.7, -1.1])
HAND_B2 = 0.25
HAND_X = np.array([1.0, 2.0, -1.0, 0.5])
HAND_LOGIT = 0.029999999999999943
HAND_PROB = 0.5074994375506203


def hand_params():
    return FfnParams(HAND_W1.copy(), HAND_B1.copy(), HAND_W2.copy(), HAND_B2)


def random_params(rng, in_dim, hidden):
    return FfnParams(
        w1=rng.normal(size=(hidden, in_dim)),
        b1=rng.normal(size=hidden),
        w2=rng.normal(size=hidden),
        b2=float(rng.normal()),
    )


class TestForward:
    def test_hand_computed_logit(self):
        assert ffn_logit(hand_params(), HAND_X) == pytest.approx(HAND_LOGIT, abs=1e-15)
        assert sigmoid(HAND_LOGIT) == pytest.approx(HAND_PROB, abs=1e-15)

    def test_zero_params_give_half(self):
        p = zero_params(4, hidden=3)
        assert ffn_logit(p, HAND_X) == 0.0
        assert float(sigmoid(0.0)) == 0.5

    def test_probability_matches_sigmoid_identity(self):
        rng = np.random.default_rng(2)
        for _ in range(100):
            z = float(rng.uniform(-30, 30))
            p = float(sigmoid(z))
            assert 0.0 < p < 1.0
            assert abs(p - 1.0 / (1.0 + math.exp(-z))) < 1e-12

    def test_bce_symmetry(self):
        # BCE(y=1, p) == BCE(y=0, 1-p) for all p, via mirrored logits.
        rng = np.random.default_rng(3)
        params = random_params(rng, 4, 3)
        mirrored = FfnParams(-params.w1.copy(), -params.b1.copy(), params.w2.copy(), -params.b2)
        # simpler: loss identity on raw logits
        for z in rng.uniform(-20, 20, size=50):
            xs = np.array([[1.0]])
            p1 = FfnParams(np.zeros((1, 1)), np.zeros(1), np.ones(1) * 0, float(z))
            y1 = bce_loss(p1, xs, np.array([1.0]))
            p0 = FfnParams(np.zeros((1, 1)), np.zeros(1), np.ones(1) * 0, float(-z))
            y0 = bce_loss(p0, xs, np.array([0.0]))
            assert y1 == pytest.approx(y0, abs=1e-12)

    def test_initial_loss_at_zero_init_is_ln2(self):
        params = zero_params(6, hidden=4)
        xs = np.random.default_rng(0).normal(size=(20, 6))
        ys = np.asarray([1.0] * 10 + [0.0] * 10)
        assert bce_loss(params, xs, ys) == pytest.approx(math.log(2), abs=1e-12)


class TestGradients:
    def test_matches_finite_differences_randomized(self):
        rng = np.random.default_rng(42)
        worst = 0.0
        for _ in range(100):
            in_dim = int(rng.integers(2, 10))
            hidden = int(rng.integers(1, 8))
            params = random_params(rng, in_dim, hidden)
            x = rng.normal(size=in_dim)
            y = int(rng.integers(0, 2))
            worst = max(worst, gradient_check(params, x, y))
        assert worst < 1e-4

    def test_zero_input_dead_relu(self):
        rng = np.random.default_rng(7)
        params = random_params(rng, 4, 3)
        params.b1[:] = -1.0  # all units dead at x = 0
        gw1, gb1, gw2, gb2 = bce_gradients(params, np.zeros((1, 4)), np.array([1.0]))
        np.testing.assert_array_equal(gw1, 0.0)
        np.testing.assert_array_equal(gb1, 0.0)
        np.testing.assert_array_equal(gw2, 0.0)  # h = 0 as well

    def test_duplicated_sample_same_mean_gradient(self):
        rng = np.random.default_rng(8)
        params = random_params(rng, 5, 4)
        x = rng.normal(size=5)
        one = bce_gradients(params, x.reshape(1, -1), np.array([1.0]))
        three = bce_gradients(params, np.stack([x, x, x]), np.array([1.0, 1.0, 1.0]))
        for a, b in zip(one, three):
            np.testing.assert_allclose(a, b, atol=1e-12)


def separable_samples(n_pos=40, n_neg=40, seed=0):
    # Positives and negatives differ in one feature.
    rng = np.random.default_rng(seed)
    samples = []
    for i in range(n_pos + n_neg):
        y = 1 if i < n_pos else 0
        x = rng.normal(size=6) * 0.1
        x[2] = 1.0 if y else -1.0
        samples.append((f"q{i % 7}", x, y))
    return samples


class TestTrain:
    def test_separable_set_converges(self):
        params, losses = train(
            separable_samples(),
            TrainConfig(epochs=200, seed=5, neg_per_pos=0),
            hidden=8,
        )
        assert losses[-1] < 0.1
        assert losses[0] > losses[-1]

    def test_same_seed_bit_identical(self):
        cfg = TrainConfig(epochs=20, seed=77)
        p1, l1 = train(separable_samples(), cfg, hidden=4)
        p2, l2 = train(separable_samples(), cfg, hidden=4)
        assert l1 == l2
        np.testing.assert_array_equal(p1.w1, p2.w1)
        np.testing.assert_array_equal(p1.b1, p2.b1)
        np.testing.assert_array_equal(p1.w2, p2.w2)
        assert p1.b2 == p2.b2

    def test_no_positives_is_degenerate(self):
        samples = [("q", np.zeros(3), 0) for _ in range(10)]
        with pytest.raises(DegenerateTrainingSetError, match="degenerate"):
            train(samples, TrainConfig(epochs=1))

    def test_subsampling_caps_negatives(self):
        rng = np.random.default_rng(0)
        samples = [("q1", rng.normal(size=3), 1)] + [
            ("q1", rng.normal(size=3), 0) for _ in range(50)
        ]
        # neg_per_pos=2 keeps 1 positive + 2 negatives; the set trains fine
        params, losses = train(samples, TrainConfig(epochs=5, neg_per_pos=2, seed=1), hidden=2)
        assert len(losses) == 5

    def test_sgd_optimizer_runs(self):
        params, losses = train(
            separable_samples(),
            TrainConfig(epochs=300, seed=5, optimizer="sgd", learning_rate=0.5, neg_per_pos=0),
            hidden=8,
        )
        assert losses[-1] < 0.3


def toy_scoring_setup():
    corpus = corpus_from_passages(
        [
            Passage("A", "", "alpha beta gamma"),
            Passage("B", "", "delta epsilon"),
            Passage("C", "", "zeta eta theta"),
        ]
    )
    encoder = LexicalEncoder(build_index(corpus))
    question = Question(qid="q", text="alpha delta", answer="", supporting_ids=frozenset({"B"}))
    return corpus, encoder, question


class TestScoring:
    def test_zero_weights_probability_half(self):
        corpus, encoder, q = toy_scoring_setup()
        params = zero_params(16)
        got = score_chain(params, encoder, q, Chain("A", "B"), corpus)
        assert got.logit == 0.0
        assert got.probability == 0.5

    def test_self_link_well_defined(self):
        corpus, encoder, q = toy_scoring_setup()
        params = init_params(16, hidden=4, seed=3)
        got = score_chain(params, encoder, q, Chain("A", "A"), corpus)
        assert math.isfinite(got.logit)

    def test_entity_only_ignores_first(self):
        corpus, encoder, q = toy_scoring_setup()
        params = init_params(8, hidden=4, seed=4)
        s1 = score_entity_only(params, encoder, q, Chain("A", "B"), corpus)
        s2 = score_entity_only(params, encoder, q, Chain("C", "B"), corpus)
        assert s1.logit == s2.logit

    def test_pointwise_zero_weights(self):
        corpus, encoder, q = toy_scoring_setup()
        got = score_pointwise(zero_params(8), encoder, q, corpus.get("A"))
        assert got.probability == 0.5

    def test_hand_weights_through_score_chain(self):
        corpus, encoder, q = toy_scoring_setup()
        d = encoder.encode(q.text, corpus.get("A")).vector
        e = encoder.encode(q.text, corpus.get("B")).vector
        x = np.concatenate([d, e])
        rng = np.random.default_rng(11)
        params = random_params(rng, 16, 3)
        want = float(params.w2 @ np.maximum(params.w1 @ x + params.b1, 0) + params.b2)
        got = score_chain(params, encoder, q, Chain("A", "B"), corpus)
        assert got.logit == pytest.approx(want, abs=1e-12)


class TestRankPassages:
    def chain_set(self, pairs):
        return ChainSet(qid="q", chains=[Chain(a, b) for a, b in pairs], initial_k=2)

    def test_max_aggregation(self):
        corpus, encoder, q = toy_scoring_setup()
        # Train nothing; use a params vector that scores by e-feature f1 alone.
        params = zero_params(16, hidden=1)
        params.w1[0, 8] = 1.0  # first e-feature (query-term fraction)
        params.w2[0] = 1.0
        cs = self.chain_set([("A", "A"), ("A", "B"), ("C", "B")])
        ranked = rank_passages(params, encoder, q, cs, corpus, k=5)
        ids = [pid for pid, _ in ranked]
        assert set(ids) == {"A", "B"}
        scores = dict(ranked)
        c1 = score_chain(params, encoder, q, Chain("A", "B"), corpus).probability
        c2 = score_chain(params, encoder, q, Chain("C", "B"), corpus).probability
        assert scores["B"] == pytest.approx(max(c1, c2))

    def test_ties_broken_by_id_with_zero_model(self):
        corpus, encoder, q = toy_scoring_setup()
        cs = self.chain_set([("A", "C"), ("A", "B"), ("A", "A")])
        ranked = rank_passages(zero_params(16), encoder, q, cs, corpus, k=3)
        assert [pid for pid, _ in ranked] == ["A", "B", "C"]

    def test_monotone_transform_invariance(self):
        corpus, encoder, q = toy_scoring_setup()
        rng = np.random.default_rng(21)
        params = random_params(rng, 16, 4)
        cs = self.chain_set([("A", "A"), ("A", "B"), ("C", "C"), ("C", "B")])
        base = rank_passages(params, encoder, q, cs, corpus, k=4)
        # scaling w2 and b2 by a positive constant is strictly increasing on logits
        scaled = FfnParams(params.w1, params.b1, params.w2 * 3.0, params.b2 * 3.0)
        again = rank_passages(scaled, encoder, q, cs, corpus, k=4)
        assert [pid for pid, _ in base] == [pid for pid, _ in again]


class TestModelIO:
    def test_round_trip(self, tmp_path):
        params = init_params(16, hidden=5, seed=1)
        path = tmp_path / "model.json"
        save_model(params, path, kind="chain", encoder_fingerprint="lexical/8")
        loaded, meta = load_model(path)
        np.testing.assert_array_equal(loaded.w1, params.w1)
        np.testing.assert_array_equal(loaded.b1, params.b1)
        np.testing.assert_array_equal(loaded.w2, params.w2)
        assert loaded.b2 == params.b2
        assert meta["kind"] == "chain"

    def test_save_deterministic(self, tmp_path):
        params = init_params(8, hidden=3, seed=9)
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        save_model(params, a)
        save_model(params.copy(), b)
        assert a.read_bytes() == b.read_bytes()
