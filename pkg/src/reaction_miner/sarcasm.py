"""Rule-based sarcasm labeling over classified emotion scores.

A comment is a candidate when its top-2 emotion labels form an opposing
pair; it is labeled sarcastic when the Distance Ratio falls inside
[x1, x2] and both Score Ratios clear their floors. Undefined ratios
(zero denominators) fail their check.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field

from reaction_miner.emotions import Emotion, pair_key, parse_emotion
from reaction_miner.errors import ConfigError, NoSignalError
from reaction_miner.emoclass import EmotionScores, top2

DEFAULT_COMBOS = frozenset({
    pair_key(Emotion.ANGRY, Emotion.HAHA),
    pair_key(Emotion.ANGRY, Emotion.WOW),
})


@dataclass(frozen=True)
class SarcasmThresholds:
    x1: float = 0.5
    x2: float = 10.0
    y1: float = 0.1
    y2: float = 0.5
    combos: frozenset = DEFAULT_COMBOS

    def __post_init__(self):
        if not 0 <= self.x1 <= self.x2:
            raise ConfigError("require 0 <= x1 <= x2")
        if not (0 < self.y1 <= 1 and 0 < self.y2 <= 1):
            raise ConfigError("require y1, y2 in (0, 1]")
        if not self.combos:
            raise ConfigError("combos must be non-empty")


# Chinese comments tend to carry one dominant emotion, so the window is
# wider and the ratio floors lower.
DEFAULT_PROFILES = {
    "en": SarcasmThresholds(),
    "zh": SarcasmThresholds(x1=0.5, x2=50.0, y1=0.05, y2=0.2),
}


@dataclass
class SarcasmVerdict:
    candidate: bool
    distance_ratio: float | None
    r12: float | None
    r23: float | None
    sarcastic: bool
    reason: str


def is_candidate(top_pair: tuple[Emotion, Emotion],
                 thresholds: SarcasmThresholds) -> bool:
    """True iff the unordered top-2 pair is an opposing combo."""
    return pair_key(*top_pair) in thresholds.combos


def distance_ratio(scores: EmotionScores) -> float | None:
    """(S3 - S2) / (S2 - S1) over the top-3 ranked scores; None when S1 = S2."""
    if scores.nosignal:
        raise NoSignalError("distance ratio undefined for no-signal scores")
    s1, s2, s3 = (scores.ranked[i][1] for i in range(3))
    if s1 == s2:
        return None
    return (s3 - s2) / (s2 - s1)


def score_ratios(scores: EmotionScores) -> tuple[float, float] | None:
    """(r23, r12) = (S3/S2, S2/S1); None when S1 or S2 is zero."""
    if scores.nosignal:
        raise NoSignalError("score ratios undefined for no-signal scores")
    s1, s2, s3 = (scores.ranked[i][1] for i in range(3))
    if s1 == 0 or s2 == 0:
        return None
    return s3 / s2, s2 / s1


def label_sarcasm(scores: EmotionScores,
                  thresholds: SarcasmThresholds) -> SarcasmVerdict:
    """Candidate filter, then Distance Ratio window and Score Ratio floors."""
    if scores.nosignal:
        raise NoSignalError("cannot label sarcasm on no-signal scores")
    candidate = is_candidate(top2(scores), thresholds)
    dr = distance_ratio(scores)
    ratios = score_ratios(scores)
    r23, r12 = ratios if ratios is not None else (None, None)
    if not candidate:
        return SarcasmVerdict(False, dr, r12, r23, False, "not-candidate")
    if dr is None or ratios is None:
        return SarcasmVerdict(True, dr, r12, r23, False, "DegenerateScores")
    if not thresholds.x1 <= dr <= thresholds.x2:
        return SarcasmVerdict(True, dr, r12, r23, False, "distance-out-of-range")
    if r23 < thresholds.y1 or r12 < thresholds.y2:
        return SarcasmVerdict(True, dr, r12, r23, False, "ratio-below-floor")
    return SarcasmVerdict(True, dr, r12, r23, True, "sarcastic")


def format_verdict(comment_id: str, v: SarcasmVerdict) -> str:
    def num(x):
        return "NA" if x is None else f"{x:.6f}"

    return "\t".join([
        comment_id,
        "1" if v.candidate else "0",
        num(v.distance_ratio),
        num(v.r23),
        num(v.r12),
        "1" if v.sarcastic else "0",
        v.reason,
    ])


def _parse_combos(raw: str) -> frozenset:
    combos = set()
    for part in raw.split(","):
        part = part.strip()
        if not part:
            continue
        a, _, b = part.partition("-")
        combos.add(pair_key(parse_emotion(a), parse_emotion(b)))
    if not combos:
        raise ConfigError("no combos parsed from threshold config")
    return frozenset(combos)


def load_thresholds(path, profile: str = "en") -> SarcasmThresholds:
    """Read one language profile from a key-value threshold config file."""
    parser = configparser.ConfigParser()
    read = parser.read(path, encoding="utf-8")
    if not read:
        raise ConfigError(f"cannot read threshold config {path}")
    if profile not in parser:
        raise ConfigError(f"threshold config {path} has no [{profile}] section")
    section = parser[profile]
    kwargs = {}
    for key in ("x1", "x2", "y1", "y2"):
        if key in section:
            kwargs[key] = section.getfloat(key)
    if "combos" in section:
        kwargs["combos"] = _parse_combos(section["combos"])
    return SarcasmThresholds(**kwargs)


def save_thresholds(profiles: dict[str, SarcasmThresholds], path) -> None:
    parser = configparser.ConfigParser()
    for name, t in profiles.items():
        combos = ",".join(f"{a.value}-{b.value}" for a, b in sorted(
            t.combos, key=lambda p: (p[0].value, p[1].value)))
        parser[name] = {
            "x1": repr(t.x1), "x2": repr(t.x2),
            "y1": repr(t.y1), "y2": repr(t.y2),
            "combos": combos,
        }
    with open(path, "w", encoding="utf-8") as fh:
        parser.write(fh)
