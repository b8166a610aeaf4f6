"""The five reaction emotions and their canonical ordering.

The canonical order (Angry, Haha, Wow, Sad, Love) is used everywhere a
stable total order is needed: matrix row order, ranking tie-breaks and
serialized column order.
"""

from enum import Enum


class Emotion(Enum):
    ANGRY = "angry"
    HAHA = "haha"
    WOW = "wow"
    SAD = "sad"
    LOVE = "love"

    def __str__(self) -> str:
        return self.value


# Definition order of the enum is the canonical order.
CANONICAL_ORDER: tuple[Emotion, ...] = tuple(Emotion)

EMOTION_INDEX: dict[Emotion, int] = {e: i for i, e in enumerate(CANONICAL_ORDER)}

N_EMOTIONS = len(CANONICAL_ORDER)


def parse_emotion(name: str) -> Emotion:
    """Parse a lowercase emotion name such as 'angry'."""
    try:
        return Emotion(name.strip().lower())
    except ValueError:
        raise ValueError(f"unknown emotion label: {name!r}") from None


def pair_key(a: Emotion, b: Emotion) -> tuple[Emotion, Emotion]:
    """Canonical representation of an unordered emotion pair."""
    if a is b:
        raise ValueError("emotion pair must contain two distinct emotions")
    if EMOTION_INDEX[a] <= EMOTION_INDEX[b]:
        return (a, b)
    return (b, a)


ALL_PAIRS: tuple[tuple[Emotion, Emotion], ...] = tuple(
    (CANONICAL_ORDER[i], CANONICAL_ORDER[j])
    for i in range(N_EMOTIONS)
    for j in range(i + 1, N_EMOTIONS)
)
