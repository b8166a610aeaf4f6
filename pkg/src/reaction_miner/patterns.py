"""Wildcard pattern mining and the PF / IEF / DIV / ED weighting.

A pattern is a tuple of 2 or 3 token surfaces with exactly one wildcard
slot ("*"). Mining enumerates contiguous 2- and 3-grams over tokenized
labeled comments, wildcardizes each Word position whose surface survived
graph reduction, and keeps candidates with enough total frequency and
enough distinct slot fillers.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from reaction_miner.emotions import CANONICAL_ORDER, EMOTION_INDEX, Emotion, N_EMOTIONS
from reaction_miner.errors import ModelError
from reaction_miner.textproc import WILDCARD, TokenSeq, is_symbol

Pattern = tuple  # tuple[str, ...] with exactly one WILDCARD entry


@dataclass
class MiningParams:
    min_pattern_freq: int = 10
    min_fillers: int = 3


@dataclass
class PatternStats:
    """Per-emotion frequencies and the observed wildcard fillers."""

    freq: dict[Emotion, int]
    fillers: set[str] | None = None
    n_fillers: int = 0

    def __post_init__(self):
        if self.fillers is not None:
            self.n_fillers = len(self.fillers)

    @property
    def total(self) -> int:
        return sum(self.freq.values())


def wildcard_slot(pattern: Pattern) -> int:
    return pattern.index(WILDCARD)


def extract_patterns(reduced, labeled_tokens, params: MiningParams | None = None):
    """Mine wildcard patterns from tokenized labeled comments.

    `labeled_tokens` yields (TokenSeq, Emotion) pairs. Windows never cross
    comment boundaries. A window qualifies when every element either
    survived reduction or is a Symbol; the wildcard slot must be a Word
    surface present in the reduced graph (a subjective term).

    Returns (patterns, stats) as parallel lists, ordered by descending
    total frequency then by pattern tuple.
    """
    if params is None:
        params = MiningParams()
    alive = reduced.nodes

    # Phase 1: per-emotion n-gram type counts (cheap, tuple-keyed).
    ngram_counts: dict[Emotion, Counter] = {e: Counter() for e in CANONICAL_ORDER}
    for seq, emo in labeled_tokens:
        toks = seq.tokens
        if len(toks) < 2:
            continue
        counter = ngram_counts[emo]
        counter.update(zip(toks, toks[1:]))
        if len(toks) >= 3:
            counter.update(zip(toks, toks[1:], toks[2:]))

    # Phase 2: wildcardize distinct surviving n-gram types.
    cand_freq: dict[Pattern, dict[Emotion, int]] = {}
    cand_fillers: dict[Pattern, set[str]] = {}
    survives_cache: dict[tuple, bool] = {}
    for emo in CANONICAL_ORDER:
        for gram, count in ngram_counts[emo].items():
            ok = survives_cache.get(gram)
            if ok is None:
                ok = all(t in alive or is_symbol(t) for t in gram)
                survives_cache[gram] = ok
            if not ok:
                continue
            for pos, tok in enumerate(gram):
                if is_symbol(tok) or tok not in alive:
                    continue
                pattern = gram[:pos] + (WILDCARD,) + gram[pos + 1 :]
                freqs = cand_freq.get(pattern)
                if freqs is None:
                    freqs = {e: 0 for e in CANONICAL_ORDER}
                    cand_freq[pattern] = freqs
                    cand_fillers[pattern] = set()
                freqs[emo] += count
                cand_fillers[pattern].add(tok)

    retained = [
        (p, f)
        for p, f in cand_freq.items()
        if len(cand_fillers[p]) >= params.min_fillers
        and sum(f.values()) >= params.min_pattern_freq
    ]
    retained.sort(key=lambda pf: (-sum(pf[1].values()), pf[0]))
    patterns = [p for p, _ in retained]
    stats = [PatternStats(f, cand_fillers[p]) for p, f in retained]
    return patterns, stats


# --------------------------------------------------------------------------
# Weighting
# --------------------------------------------------------------------------

def pf(stats: PatternStats, emo: Emotion, log_base: float = math.e) -> float:
    """log(f + 1) for the pattern's frequency in one emotion."""
    return math.log(stats.freq.get(emo, 0) + 1, log_base)


def ief(stats: PatternStats) -> float:
    """|Emotion| over the number of emotions where the pattern occurs."""
    nonzero = sum(1 for f in stats.freq.values() if f > 0)
    if nonzero == 0:
        raise ValueError("pattern with all-zero frequencies should not exist")
    return N_EMOTIONS / nonzero


def div(stats: PatternStats, log_base: float = math.e) -> float:
    """log of the number of distinct wildcard fillers."""
    if stats.n_fillers < 1:
        raise ValueError("retained pattern must have at least one filler")
    return math.log(stats.n_fillers, log_base)


def ed(stats: PatternStats, emo: Emotion, log_base: float = math.e) -> float:
    """Emotion Degree: PF x IEF x DIV."""
    return pf(stats, emo, log_base) * ief(stats) * div(stats, log_base)


@dataclass
class EmotionModel:
    """Pattern inventory with the |P| x 5 ED matrix and per-emotion ranks."""

    patterns: list[Pattern]
    stats: list[PatternStats]
    ed: np.ndarray = field(default_factory=lambda: np.zeros((0, N_EMOTIONS)))
    rank: dict[Emotion, list[int]] = field(default_factory=dict)
    pattern_index: dict[Pattern, int] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.patterns)


def build_model(patterns, stats, log_base: float = math.e) -> EmotionModel:
    """Fill the ED matrix and per-emotion rankings (descending ED, ties by
    pattern index)."""
    n = len(patterns)
    matrix = np.zeros((n, N_EMOTIONS))
    for i, st in enumerate(stats):
        for e in CANONICAL_ORDER:
            matrix[i, EMOTION_INDEX[e]] = ed(st, e, log_base)
    rank = {}
    for e in CANONICAL_ORDER:
        col = matrix[:, EMOTION_INDEX[e]]
        rank[e] = sorted(range(n), key=lambda i: (-col[i], i))
    index = {p: i for i, p in enumerate(patterns)}
    return EmotionModel(list(patterns), list(stats), matrix, rank, index)


def match(tokens: TokenSeq, model: EmotionModel) -> dict[int, int]:
    """Count overlapping pattern occurrences in one comment.

    Non-wildcard elements must equal the token exactly; the wildcard slot
    accepts any single Word token (not a Symbol). Windows never span
    comment boundaries.
    """
    index = model.pattern_index
    counts: dict[int, int] = {}
    toks = tokens.tokens
    n = len(toks)
    for length in (2, 3):
        for start in range(n - length + 1):
            window = tuple(toks[start : start + length])
            for pos in range(length):
                if is_symbol(window[pos]):
                    continue
                candidate = window[:pos] + (WILDCARD,) + window[pos + 1 :]
                idx = index.get(candidate)
                if idx is not None:
                    counts[idx] = counts.get(idx, 0) + 1
    return counts


# --------------------------------------------------------------------------
# Serialization (frequencies and filler counts only; ED and ranks are
# derived data, recomputed on load)
# --------------------------------------------------------------------------

MODEL_HEADER = "#reaction-miner-model v1"


def save_model(model: EmotionModel, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(MODEL_HEADER + "\n")
        for p, st in zip(model.patterns, model.stats):
            fields = [" ".join(p)]
            fields += [str(st.freq.get(e, 0)) for e in CANONICAL_ORDER]
            fields.append(str(st.n_fillers))
            fh.write("\t".join(fields) + "\n")


def load_model(path, log_base: float = math.e) -> EmotionModel:
    patterns: list[Pattern] = []
    stats: list[PatternStats] = []
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        if header != MODEL_HEADER:
            raise ModelError(f"{path}: unrecognized model header {header!r}")
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            fields = line.split("\t")
            if len(fields) != 2 + N_EMOTIONS:
                raise ModelError(f"{path}: malformed model line {line!r}")
            pattern = tuple(fields[0].split(" "))
            freq = {
                e: int(fields[1 + i]) for i, e in enumerate(CANONICAL_ORDER)
            }
            n_fillers = int(fields[-1])
            patterns.append(pattern)
            stats.append(PatternStats(freq, None, n_fillers))
    return build_model(patterns, stats, log_base)
