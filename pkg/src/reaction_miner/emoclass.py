"""Emotion classification: match-count vector times the ED matrix."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from reaction_miner.emotions import CANONICAL_ORDER, EMOTION_INDEX, Emotion
from reaction_miner.errors import ModelError, NoSignalError
from reaction_miner.patterns import EmotionModel, match
from reaction_miner.textproc import TokenSeq


@dataclass
class EmotionScores:
    """Per-emotion scores of one text, ranked descending (ties by canonical
    emotion order). `nosignal` marks all-zero results whose rank order
    carries no meaning."""

    score: dict[Emotion, float]
    ranked: list[tuple[Emotion, float]]
    matched_patterns: int
    nosignal: bool = False


def _rank(score: dict[Emotion, float]) -> list[tuple[Emotion, float]]:
    return sorted(
        ((e, score[e]) for e in CANONICAL_ORDER),
        key=lambda es: (-es[1], EMOTION_INDEX[es[0]]),
    )


def scores_from_vector(vec) -> EmotionScores:
    """Wrap a raw 5-vector (canonical order) into EmotionScores."""
    score = {e: float(vec[EMOTION_INDEX[e]]) for e in CANONICAL_ORDER}
    nosignal = not any(v > 0 for v in score.values())
    return EmotionScores(score, _rank(score), 0, nosignal)


def classify(tokens: TokenSeq, model: EmotionModel) -> EmotionScores:
    """Score one comment: v (match counts) dot W (|P| x 5 ED matrix)."""
    if len(model) == 0:
        raise ModelError("cannot classify with an empty emotion model")
    counts = match(tokens, model)
    if not counts:
        zeros = {e: 0.0 for e in CANONICAL_ORDER}
        return EmotionScores(zeros, _rank(zeros), 0, nosignal=True)
    vec = np.zeros(len(model))
    for idx, c in counts.items():
        vec[idx] = c
    raw = vec @ model.ed
    score = {e: float(raw[EMOTION_INDEX[e]]) for e in CANONICAL_ORDER}
    return EmotionScores(score, _rank(score), len(counts), nosignal=False)


def top2(scores: EmotionScores) -> tuple[Emotion, Emotion]:
    """The two highest-ranked emotion labels."""
    if scores.nosignal:
        raise NoSignalError("top2 undefined for a no-signal score vector")
    return scores.ranked[0][0], scores.ranked[1][0]


def format_scores(comment_id: str, scores: EmotionScores) -> str:
    """One classify output line: id, five (emotion, score) pairs, nosignal flag."""
    fields = [comment_id]
    for emo, s in scores.ranked:
        fields.append(emo.value)
        fields.append(f"{s:.6f}")
    fields.append("1" if scores.nosignal else "0")
    return "\t".join(fields)
