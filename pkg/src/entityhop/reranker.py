"""Chain re-ranker: a 2-layer feed-forward network over query-aware
passage representations, trained with binary cross-entropy.

Heads:
  - chain:       input [d; e], the representations of the initial passage
                 and the hop target (self-links use the same passage twice)
  - entity-only: input e alone (ablation; ignores where the hop came from)
  - pointwise:   input is a single passage representation (re-ranks an
                 initial list without chain structure)

The forward pass is logit = w2 . relu(W1 x + b1) + b2 and the loss is
mean BCE, computed as softplus(z) - y*z for stability. Gradients are
hand-derived and verified against central finite differences. Training is
single-threaded and fully reproducible from the seed.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .chains import Chain, ChainSet, gold_label
from .corpus import Corpus, Passage, Question
from .errors import DataError, DegenerateTrainingSetError
from .index import RankedList


@dataclass
class FfnParams:
    w1: np.ndarray  # (hidden, in_dim)
    b1: np.ndarray  # (hidden,)
    w2: np.ndarray  # (hidden,)
    b2: float

    @property
    def in_dim(self) -> int:
        return self.w1.shape[1]

    @property
    def hidden(self) -> int:
        return self.w1.shape[0]

    def copy(self) -> "FfnParams":
        return FfnParams(self.w1.copy(), self.b1.copy(), self.w2.copy(), float(self.b2))


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 1e-2
    epochs: int = 200
    batch_size: int = 32
    neg_per_pos: int = 10  # 0 = keep all negatives
    seed: int = 13
    optimizer: str = "adam"  # "adam" | "sgd"


@dataclass
class ChainScore:
    chain: Chain | None
    logit: float
    probability: float


# One training sample: (question id, feature vector, 0/1 label).
Sample = tuple[str, np.ndarray, int]


def init_params(in_dim: int, hidden: int = 32, seed: int = 13) -> FfnParams:
    """Weights uniform in +-1/sqrt(fan_in), biases zero."""
    rng = np.random.default_rng(seed)
    r1 = 1.0 / math.sqrt(in_dim)
    r2 = 1.0 / math.sqrt(hidden)
    return FfnParams(
        w1=rng.uniform(-r1, r1, size=(hidden, in_dim)),
        b1=np.zeros(hidden),
        w2=rng.uniform(-r2, r2, size=hidden),
        b2=0.0,
    )


def zero_params(in_dim: int, hidden: int = 32) -> FfnParams:
    return FfnParams(
        w1=np.zeros((hidden, in_dim)), b1=np.zeros(hidden), w2=np.zeros(hidden), b2=0.0
    )


def sigmoid(z):
    z = np.asarray(z, dtype=np.float64)
    with np.errstate(over="ignore"):
        return np.where(z >= 0, 1.0 / (1.0 + np.exp(-z)), np.exp(z) / (1.0 + np.exp(z)))


def ffn_logit(params: FfnParams, x: np.ndarray) -> float:
    h = np.maximum(params.w1 @ x + params.b1, 0.0)
    return float(params.w2 @ h + params.b2)


def ffn_logits(params: FfnParams, xs: np.ndarray) -> np.ndarray:
    h = np.maximum(xs @ params.w1.T + params.b1, 0.0)
    return h @ params.w2 + params.b2


def _softplus(z: np.ndarray) -> np.ndarray:
    return np.log1p(np.exp(-np.abs(z))) + np.maximum(z, 0.0)


def bce_loss(params: FfnParams, xs: np.ndarray, ys: np.ndarray) -> float:
    """Mean binary cross-entropy, -[y log p + (1-y) log(1-p)], computed as
    softplus(z) - y z."""
    z = ffn_logits(params, xs)
    return float(np.mean(_softplus(z) - ys * z))


def bce_gradients(params: FfnParams, xs: np.ndarray, ys: np.ndarray):
    """Analytic gradients of the mean BCE w.r.t. every parameter."""
    n = xs.shape[0]
    z1 = xs @ params.w1.T + params.b1  # (n, hidden)
    h = np.maximum(z1, 0.0)
    z = h @ params.w2 + params.b2  # (n,)
    dz = (sigmoid(z) - ys) / n  # dL/dz
    gw2 = h.T @ dz
    gb2 = float(dz.sum())
    dh = np.outer(dz, params.w2)
    dz1 = dh * (z1 > 0.0)
    gw1 = dz1.T @ xs
    gb1 = dz1.sum(axis=0)
    return gw1, gb1, gw2, gb2


def gradient_check(
    params: FfnParams, x: np.ndarray, y: int, step: float = 1e-5
) -> float:
    """Max relative error between analytic BCE gradients and central finite
    differences over every parameter. Denominator floored at 1e-6 so exact
    zeros (dead ReLU units) compare cleanly."""
    xs = x.reshape(1, -1)
    ys = np.array([float(y)])
    analytic = bce_gradients(params, xs, ys)
    tensors = [params.w1, params.b1, params.w2, np.array([params.b2])]
    analytic_flat = [np.atleast_1d(np.asarray(g, dtype=np.float64)).ravel() for g in analytic]

    worst = 0.0
    for which, tensor in enumerate(tensors):
        flat = tensor.ravel()
        for i in range(flat.size):
            orig = flat[i]
            flat[i] = orig + step
            p = params if which < 3 else FfnParams(params.w1, params.b1, params.w2, float(flat[i]))
            hi = bce_loss(p, xs, ys)
            flat[i] = orig - step
            p = params if which < 3 else FfnParams(params.w1, params.b1, params.w2, float(flat[i]))
            lo = bce_loss(p, xs, ys)
            flat[i] = orig
            numeric = (hi - lo) / (2.0 * step)
            a = analytic_flat[which][i]
            err = abs(a - numeric) / max(abs(a), abs(numeric), 1e-6)
            worst = max(worst, err)
    return worst


def _chain_features(
    encoder, question_text: str, chain: Chain, corpus: Corpus, entity_only: bool
) -> np.ndarray:
    e = encoder.encode(question_text, corpus.get(chain.last)).vector
    if entity_only:
        return e
    d = encoder.encode(question_text, corpus.get(chain.first)).vector
    return np.concatenate([d, e])


def score_chain(
    params: FfnParams, encoder, question: Question, chain: Chain, corpus: Corpus
) -> ChainScore:
    """logit = w2 . relu(W1 [d; e] + b1) + b2 with d = encode(Q, first),
    e = encode(Q, last)."""
    x = _chain_features(encoder, question.text, chain, corpus, entity_only=False)
    z = ffn_logit(params, x)
    return ChainScore(chain=chain, logit=z, probability=float(sigmoid(z)))


def score_entity_only(
    params: FfnParams, encoder, question: Question, chain: Chain, corpus: Corpus
) -> ChainScore:
    """Ablation head: the initial passage's representation is ignored."""
    x = _chain_features(encoder, question.text, chain, corpus, entity_only=True)
    z = ffn_logit(params, x)
    return ChainScore(chain=chain, logit=z, probability=float(sigmoid(z)))


def score_pointwise(
    params: FfnParams, encoder, question: Question, passage: Passage
) -> ChainScore:
    x = encoder.encode(question.text, passage).vector
    z = ffn_logit(params, x)
    return ChainScore(chain=None, logit=z, probability=float(sigmoid(z)))


def build_chain_dataset(
    questions: Sequence[Question],
    chain_sets: dict[str, ChainSet],
    corpus: Corpus,
    encoder,
    entity_only: bool = False,
) -> list[Sample]:
    samples: list[Sample] = []
    for q in questions:
        cs = chain_sets[q.qid]
        for chain in cs.chains:
            x = _chain_features(encoder, q.text, chain, corpus, entity_only)
            samples.append((q.qid, x, int(gold_label(chain, q))))
    return samples


def build_pointwise_dataset(
    questions: Sequence[Question],
    initial: dict[str, RankedList],
    corpus: Corpus,
    encoder,
) -> list[Sample]:
    samples: list[Sample] = []
    for q in questions:
        for pid, _ in initial[q.qid]:
            x = encoder.encode(q.text, corpus.get(pid)).vector
            samples.append((q.qid, x, int(pid in q.supporting_ids)))
    return samples


def _subsample(samples: list[Sample], neg_per_pos: int, rng: np.random.Generator) -> list[Sample]:
    """Per question keep all positives and at most neg_per_pos * positives
    negatives (questions without a positive contribute nothing)."""
    if neg_per_pos == 0:
        return list(samples)
    by_qid: dict[str, list[Sample]] = {}
    for s in samples:
        by_qid.setdefault(s[0], []).append(s)
    kept: list[Sample] = []
    for qid, group in by_qid.items():
        pos = [s for s in group if s[2] == 1]
        neg = [s for s in group if s[2] == 0]
        if not pos:
            continue
        budget = neg_per_pos * len(pos)
        if len(neg) > budget:
            chosen = sorted(rng.permutation(len(neg))[:budget])
            neg = [neg[i] for i in chosen]
        kept.extend(pos)
        kept.extend(neg)
    return kept


def train(
    samples: list[Sample],
    config: TrainConfig = TrainConfig(),
    hidden: int = 32,
) -> tuple[FfnParams, list[float]]:
    """Minimize mean BCE with mini-batches; returns final parameters and the
    per-epoch mean loss series. Bit-reproducible for a fixed seed."""
    rng = np.random.default_rng(config.seed)
    kept = _subsample(samples, config.neg_per_pos, rng)
    if not any(s[2] == 1 for s in kept) or not any(s[2] == 0 for s in kept):
        raise DegenerateTrainingSetError(
            "degenerate training set: need at least one positive and one negative"
        )
    xs = np.stack([s[1] for s in kept])
    ys = np.asarray([float(s[2]) for s in kept])
    n, in_dim = xs.shape
    params = init_params(in_dim, hidden=hidden, seed=config.seed)

    if config.optimizer == "adam":
        beta1, beta2, eps = 0.9, 0.999, 1e-8
        m = [np.zeros_like(params.w1), np.zeros_like(params.b1), np.zeros_like(params.w2), 0.0]
        v = [np.zeros_like(params.w1), np.zeros_like(params.b1), np.zeros_like(params.w2), 0.0]
        step = 0
    elif config.optimizer != "sgd":
        raise ValueError(f"unknown optimizer: {config.optimizer!r}")

    losses: list[float] = []
    lr = config.learning_rate
    for _ in range(config.epochs):
        order = rng.permutation(n)
        total = 0.0
        for start in range(0, n, config.batch_size):
            idx = order[start : start + config.batch_size]
            bx, by = xs[idx], ys[idx]
            grads = bce_gradients(params, bx, by)
            total += bce_loss(params, bx, by) * len(idx)
            tensors = [params.w1, params.b1, params.w2]
            if config.optimizer == "sgd":
                for t, g in zip(tensors, grads[:3]):
                    t -= lr * g
                params.b2 -= lr * grads[3]
            else:
                step += 1
                correct1 = 1.0 - beta1**step
                correct2 = 1.0 - beta2**step
                for i, g in enumerate(grads):
                    m[i] = beta1 * m[i] + (1.0 - beta1) * g
                    v[i] = beta2 * v[i] + (1.0 - beta2) * g * g
                    update = lr * (m[i] / correct1) / (np.sqrt(v[i] / correct2) + eps)
                    if i < 3:
                        tensors[i] -= update
                    else:
                        params.b2 -= float(update)
        losses.append(total / n)
    return params, losses


def rank_passages(
    params: FfnParams,
    encoder,
    question: Question,
    chain_set: ChainSet,
    corpus: Corpus,
    k: int,
    entity_only: bool = False,
) -> RankedList:
    """Each distinct passage appearing as a chain's last element gets the
    max probability over chains ending at it; ranked by that score."""
    best: dict[str, float] = {}
    for chain in chain_set.chains:
        x = _chain_features(encoder, question.text, chain, corpus, entity_only)
        p = float(sigmoid(ffn_logit(params, x)))
        if p > best.get(chain.last, -1.0):
            best[chain.last] = p
    ranked = sorted(best.items(), key=lambda kv: (-kv[1], kv[0]))
    return ranked[:k]


MODEL_VERSION = 1


def save_model(
    params: FfnParams, path: str | Path, kind: str = "chain", encoder_fingerprint: str = "lexical/8"
) -> None:
    obj = {
        "version": MODEL_VERSION,
        "kind": kind,
        "encoder": encoder_fingerprint,
        "in_dim": params.in_dim,
        "hidden": params.hidden,
        "w1": params.w1.ravel().tolist(),
        "b1": params.b1.tolist(),
        "w2": params.w2.tolist(),
        "b2": params.b2,
    }
    Path(path).write_text(json.dumps(obj, sort_keys=True) + "\n", encoding="utf-8")


def load_model(path: str | Path) -> tuple[FfnParams, dict]:
    obj = json.loads(Path(path).read_text(encoding="utf-8"))
    if obj.get("version") != MODEL_VERSION:
        raise DataError(f"{path}: unsupported model version {obj.get('version')}")
    hidden, in_dim = int(obj["hidden"]), int(obj["in_dim"])
    params = FfnParams(
        w1=np.asarray(obj["w1"], dtype=np.float64).reshape(hidden, in_dim),
        b1=np.asarray(obj["b1"], dtype=np.float64),
        w2=np.asarray(obj["w2"], dtype=np.float64),
        b2=float(obj["b2"]),
    )
    meta = {"kind": obj.get("kind", "chain"), "encoder": obj.get("encoder", "")}
    return params, meta


def write_train_log(losses: Iterable[float], path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["epoch", "mean_loss"])
        for i, loss in enumerate(losses, start=1):
            writer.writerow([i, repr(loss)])
