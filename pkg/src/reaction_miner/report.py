"""Matplotlib figure rendering for report outputs.

Every report-producing CLI path writes a figure next to its delimited
output file (same stem, .png).
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from reaction_miner.combolearn import ALL_PAIRS, RATE_THRESHOLDS, ComboHistogram
from reaction_miner.emotions import CANONICAL_ORDER
from reaction_miner.evalharness import MetricReport


def figure_path(out_path) -> str:
    out = str(out_path)
    stem = out.rsplit(".", 1)[0] if "." in out.rsplit("/", 1)[-1] else out
    return stem + ".png"


def render_distribution(dists, path) -> None:
    """Grouped bar chart of label shares, one group per corpus name."""
    names = list(dists)
    x = np.arange(len(CANONICAL_ORDER))
    width = 0.8 / max(1, len(names))
    fig, ax = plt.subplots(figsize=(7, 4))
    for i, name in enumerate(names):
        dist = dists[name]
        shares = [dist.shares[e] for e in CANONICAL_ORDER]
        ax.bar(x + i * width, shares, width, label=f"{name} (n={dist.total})")
    ax.set_xticks(x + width * (len(names) - 1) / 2)
    ax.set_xticklabels([e.value for e in CANONICAL_ORDER])
    ax.set_ylabel("share of labeled comments")
    ax.set_title("Reaction label distribution")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_combo_histogram(hist: ComboHistogram, path) -> None:
    """Bars per emotion pair, one series per correct-training-rate threshold."""
    pairs = [p for p in ALL_PAIRS
             if any(hist.counts[t].get(p, 0) for t in RATE_THRESHOLDS)]
    if not pairs:
        pairs = list(ALL_PAIRS)
    x = np.arange(len(pairs))
    width = 0.8 / len(RATE_THRESHOLDS)
    fig, ax = plt.subplots(figsize=(8, 4))
    for i, t in enumerate(RATE_THRESHOLDS):
        counts = [hist.counts[t].get(p, 0) for p in pairs]
        ax.bar(x + i * width, counts, width, label=f"rate >= {t:.0%}")
    ax.set_xticks(x + width * (len(RATE_THRESHOLDS) - 1) / 2)
    ax.set_xticklabels([f"{a.value}-{b.value}" for a, b in pairs],
                       rotation=30, ha="right")
    ax.set_ylabel("reliably learned sarcastic examples")
    ax.set_title("Emotion combination learning result")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_metrics(reports: dict[int, MetricReport], path) -> None:
    """Bar chart of the four metrics per agreement level."""
    levels = sorted(reports)
    names = ["accuracy", "f1", "recall", "precision"]
    x = np.arange(len(names))
    width = 0.8 / max(1, len(levels))
    fig, ax = plt.subplots(figsize=(7, 4))
    for i, level in enumerate(levels):
        r = reports[level]
        vals = [r.accuracy, r.f1, r.recall, r.precision]
        ax.bar(x + i * width, vals, width, label=f"agree-{level}")
    ax.set_xticks(x + width * (len(levels) - 1) / 2)
    ax.set_xticklabels(names)
    ax.set_ylim(0, 1.05)
    ax.set_title("Sarcasm evaluation")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
