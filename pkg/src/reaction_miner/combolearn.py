"""Discovery of sarcasm-indicative emotion combinations.

Each annotated comment becomes a 5 x n matrix of pattern scores (per-emotion
rank position times in-comment frequency). A small learner is trained to
predict the sarcasm flag; the per-example correct-training-rate over epochs
selects reliably learned sarcastic examples, whose top-2 emotion pairs are
tallied into a histogram at the 100/90/80/70% rate thresholds.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from reaction_miner.emotions import (
    ALL_PAIRS, CANONICAL_ORDER, EMOTION_INDEX, Emotion, pair_key,
)
from reaction_miner.errors import ConfigError, TrainingError
from reaction_miner.emoclass import EmotionScores, top2
from reaction_miner.patterns import EmotionModel, match
from reaction_miner.textproc import TokenSeq

RATE_THRESHOLDS = (1.0, 0.9, 0.8, 0.7)


def build_matrix(tokens: TokenSeq, model: EmotionModel, n: int) -> np.ndarray:
    """5 x n pattern-score matrix: entry [e][j] is the 1-based rank position
    (j+1) of emotion e's j-th top pattern times its frequency in the comment."""
    if n < 1 or n > len(model):
        raise ConfigError(
            f"pattern budget n={n} outside [1, {len(model)}] for this model")
    counts = match(tokens, model)
    out = np.zeros((len(CANONICAL_ORDER), n))
    for e in CANONICAL_ORDER:
        row = EMOTION_INDEX[e]
        for j, pidx in enumerate(model.rank[e][:n]):
            c = counts.get(pidx, 0)
            if c:
                out[row, j] = (j + 1) * c
    return out


@dataclass
class LearnerConfig:
    epochs: int = 50
    lr: float = 0.1
    arch: str = "cnn"  # "cnn" | "logreg"
    batch_size: int = 32
    filters: int = 4
    kernel: int = 3


@dataclass
class TrainTrace:
    """Per-example correctness over epochs plus the final parameters."""

    history: np.ndarray  # (epochs, n_examples) bool
    rate: np.ndarray  # (n_examples,) fraction of epochs predicted correctly
    params: dict = field(default_factory=dict)


def _sigmoid(z):
    return 1.0 / (1.0 + np.exp(-np.clip(z, -30, 30)))


class _LogReg:
    """Logistic regression on the flattened score matrix."""

    def __init__(self, n_features, rng):
        self.w = rng.normal(0, 0.01, n_features)
        self.b = 0.0

    def forward(self, X):
        return _sigmoid(X.reshape(len(X), -1) @ self.w + self.b)

    def step(self, X, y, lr):
        flat = X.reshape(len(X), -1)
        p = _sigmoid(flat @ self.w + self.b)
        g = (p - y) / len(y)
        self.w -= lr * (flat.T @ g)
        self.b -= lr * g.sum()

    def params(self):
        return {"w": self.w, "b": self.b}


class _ConvNet:
    """One 1-D convolution shared across the 5 emotion rows (4 filters,
    kernel width 3), ReLU, max-pool per (row, filter), logistic output."""

    def __init__(self, n_cols, rng, filters=4, kernel=3):
        if n_cols < kernel:
            raise ConfigError(
                f"cnn needs at least {kernel} pattern columns, got {n_cols}")
        self.kernel = kernel
        self.K = rng.normal(0, 0.1, (filters, kernel))
        self.bK = np.zeros(filters)
        self.w = rng.normal(0, 0.1, len(CANONICAL_ORDER) * filters)
        self.b = 0.0

    def _conv(self, X):
        win = np.lib.stride_tricks.sliding_window_view(X, self.kernel, axis=2)
        z = np.einsum("brtw,fw->brft", win, self.K) + self.bK[None, None, :, None]
        return win, z

    def forward(self, X):
        _, z = self._conv(X)
        a = np.maximum(z, 0.0)
        pooled = a.max(axis=3)
        h = pooled.reshape(len(X), -1)
        return _sigmoid(h @ self.w + self.b)

    def step(self, X, y, lr):
        win, z = self._conv(X)
        a = np.maximum(z, 0.0)
        arg = a.argmax(axis=3)
        pooled = np.take_along_axis(a, arg[..., None], axis=3)[..., 0]
        h = pooled.reshape(len(X), -1)
        p = _sigmoid(h @ self.w + self.b)

        g = (p - y) / len(y)
        dw = h.T @ g
        db = g.sum()
        dh = np.outer(g, self.w).reshape(pooled.shape)
        da = np.zeros_like(a)
        np.put_along_axis(da, arg[..., None], dh[..., None], axis=3)
        dz = da * (z > 0)
        dK = np.einsum("brft,brtw->fw", dz, win)
        dbK = dz.sum(axis=(0, 1, 3))

        self.w -= lr * dw
        self.b -= lr * db
        self.K -= lr * dK
        self.bK -= lr * dbK

    def params(self):
        return {"K": self.K, "bK": self.bK, "w": self.w, "b": self.b}


def train(dataset, config: LearnerConfig | None = None, seed: int = 0) -> TrainTrace:
    """Train the configured learner; record per-example correctness after
    every epoch. Deterministic for a fixed seed."""
    if config is None:
        config = LearnerConfig()
    if not dataset:
        raise TrainingError("empty training dataset")
    X = np.stack([np.asarray(m, dtype=float) for m, _ in dataset])
    y = np.array([1.0 if s else 0.0 for _, s in dataset])
    if len(set(y.tolist())) < 2:
        raise TrainingError("training requires both classes present")

    # Standardize per flattened feature; raw rank x frequency values span
    # orders of magnitude.
    flat = X.reshape(len(X), -1)
    mu = flat.mean(axis=0)
    sigma = flat.std(axis=0)
    sigma[sigma == 0] = 1.0
    X = ((flat - mu) / sigma).reshape(X.shape)

    rng = np.random.default_rng(seed)
    if config.arch == "logreg":
        net = _LogReg(X.shape[1] * X.shape[2], rng)
    elif config.arch == "cnn":
        net = _ConvNet(X.shape[2], rng, config.filters, config.kernel)
    else:
        raise ConfigError(f"unknown learner architecture {config.arch!r}")

    n = len(X)
    history = np.zeros((config.epochs, n), dtype=bool)
    for epoch in range(config.epochs):
        perm = rng.permutation(n)
        for start in range(0, n, config.batch_size):
            idx = perm[start : start + config.batch_size]
            net.step(X[idx], y[idx], config.lr)
        history[epoch] = (net.forward(X) >= 0.5) == (y == 1.0)
    rate = history.mean(axis=0)
    params = net.params()
    params.update({"mu": mu, "sigma": sigma, "arch": config.arch})
    return TrainTrace(history, rate, params)


@dataclass
class ComboHistogram:
    """Counts of top-2 emotion pairs among reliably learned sarcastic
    examples, one bucket map per correct-training-rate threshold."""

    counts: dict[float, dict[tuple[Emotion, Emotion], int]]


def combo_histogram(dataset, trace: TrainTrace, scores) -> ComboHistogram:
    """Tally top-2 pairs of sarcastic examples with rate >= each threshold.

    `scores` holds one EmotionScores per dataset example (emoclass output);
    no-signal examples cannot be attributed and are skipped.
    """
    if not (len(dataset) == len(trace.rate) == len(scores)):
        raise ValueError("dataset, trace and scores must be aligned")
    counts: dict[float, dict] = {t: {} for t in RATE_THRESHOLDS}
    for (_, sarcastic), rate, sc in zip(dataset, trace.rate, scores):
        if not sarcastic or sc is None or sc.nosignal:
            continue
        pair = pair_key(*top2(sc))
        for t in RATE_THRESHOLDS:
            if rate >= t - 1e-12:
                counts[t][pair] = counts[t].get(pair, 0) + 1
    return ComboHistogram(counts)


def select_combos(hist: ComboHistogram, k: int) -> set[tuple[Emotion, Emotion]]:
    """The k pairs with the largest counts at the 0.7 threshold; ties break
    by canonical pair order."""
    if not 1 <= k <= len(ALL_PAIRS):
        raise ConfigError(f"k must lie in [1, {len(ALL_PAIRS)}]")
    bucket = hist.counts.get(0.7, {})
    if not bucket:
        raise ValueError("empty combo histogram at the 0.7 threshold")
    order = {p: i for i, p in enumerate(ALL_PAIRS)}
    ranked = sorted(bucket.items(), key=lambda kv: (-kv[1], order[kv[0]]))
    return {pair for pair, _ in ranked[:k]}


def format_histogram(hist: ComboHistogram) -> str:
    """`pair<TAB>count_t100<TAB>count_t90<TAB>count_t80<TAB>count_t70` lines."""
    lines = []
    for pair in ALL_PAIRS:
        row = [f"{pair[0].value}-{pair[1].value}"]
        row += [str(hist.counts[t].get(pair, 0)) for t in RATE_THRESHOLDS]
        lines.append("\t".join(row))
    return "\n".join(lines) + "\n"
