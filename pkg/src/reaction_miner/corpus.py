"""Reaction-labeled comment corpus: data model, file ingestion, label joining,
distribution reporting and a deterministic synthetic corpus generator.

File formats (UTF-8, tab-separated, one record per line, text field last so
it may contain tabs):
  comments:  id  post_id  user_id  lang  text
  reactions: post_id  user_id  reaction        (reaction lowercase)
  posts:     id  lang  text
  labeled:   id  post_id  user_id  lang  label  text
"""

from __future__ import annotations

import logging
import random
from collections import Counter
from dataclasses import dataclass, field

from reaction_miner.emotions import CANONICAL_ORDER, Emotion, parse_emotion
from reaction_miner.errors import ConfigError, CorpusFormatError

log = logging.getLogger(__name__)

SUPPORTED_LANGS = ("en", "zh")


@dataclass
class RawComment:
    id: str
    post_id: str
    user_id: str
    text: str
    lang: str


@dataclass
class ReactionEvent:
    post_id: str
    user_id: str
    reaction: Emotion


@dataclass
class LabeledComment:
    comment: RawComment
    label: Emotion


@dataclass
class NewsPost:
    id: str
    text: str
    lang: str


@dataclass
class LabelDistribution:
    counts: dict[Emotion, int]
    total: int
    shares: dict[Emotion, float]


@dataclass
class IngestResult:
    """Records plus the counts the loaders report."""

    records: list
    malformed: int = 0
    duplicates: int = 0


def _check_malformed(malformed: int, total_lines: int, path) -> None:
    if total_lines and malformed * 2 > total_lines:
        raise CorpusFormatError(
            f"{path}: {malformed} of {total_lines} lines malformed (>50%)"
        )


def load_comments(path, lang: str | None = None) -> IngestResult:
    """Load a comment file; malformed lines are counted, not fatal.

    `lang` optionally filters to one language tag. Duplicate comment ids
    are retained with a warning.
    """
    records: list[RawComment] = []
    malformed = 0
    total = 0
    seen_ids: set[str] = set()
    duplicates = 0
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            total += 1
            parts = line.split("\t", 4)
            if len(parts) != 5 or parts[3] not in SUPPORTED_LANGS or not parts[4].strip():
                malformed += 1
                continue
            cid, post_id, user_id, rec_lang, text = parts
            if lang is not None and rec_lang != lang:
                continue
            if cid in seen_ids:
                duplicates += 1
                log.warning("duplicate comment id %s in %s", cid, path)
            seen_ids.add(cid)
            records.append(RawComment(cid, post_id, user_id, text, rec_lang))
    _check_malformed(malformed, total, path)
    if malformed:
        log.info("%s: %d malformed lines skipped", path, malformed)
    return IngestResult(records, malformed, duplicates)


def load_reactions(path) -> IngestResult:
    """Load a reaction file; duplicate (post_id, user_id) keys: first wins."""
    records: list[ReactionEvent] = []
    malformed = 0
    total = 0
    seen: set[tuple[str, str]] = set()
    rejected = 0
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            total += 1
            parts = line.split("\t")
            if len(parts) != 3:
                malformed += 1
                continue
            post_id, user_id, name = parts
            try:
                reaction = parse_emotion(name)
            except ValueError:
                malformed += 1
                continue
            key = (post_id, user_id)
            if key in seen:
                rejected += 1
                continue
            seen.add(key)
            records.append(ReactionEvent(post_id, user_id, reaction))
    _check_malformed(malformed, total, path)
    if rejected:
        log.info("%s: %d duplicate reaction keys rejected", path, rejected)
    return IngestResult(records, malformed, rejected)


def load_posts(path) -> IngestResult:
    records: list[NewsPost] = []
    malformed = 0
    total = 0
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            total += 1
            parts = line.split("\t", 2)
            if len(parts) != 3 or parts[1] not in SUPPORTED_LANGS or not parts[2].strip():
                malformed += 1
                continue
            pid, lang, text = parts
            records.append(NewsPost(pid, text, lang))
    _check_malformed(malformed, total, path)
    return IngestResult(records, malformed)


def overlap_join(comments, reactions) -> list[LabeledComment]:
    """Label each comment whose (post_id, user_id) matches a reaction event.

    Output order follows input comment order; non-matching comments are
    dropped silently (count derivable from lengths).
    """
    by_key: dict[tuple[str, str], Emotion] = {}
    for ev in reactions:
        by_key.setdefault((ev.post_id, ev.user_id), ev.reaction)
    labeled = []
    for c in comments:
        reaction = by_key.get((c.post_id, c.user_id))
        if reaction is not None:
            labeled.append(LabeledComment(c, reaction))
    return labeled


def distribution(labeled) -> LabelDistribution:
    """Per-emotion counts and shares over labeled comments."""
    counts = {e: 0 for e in CANONICAL_ORDER}
    for lc in labeled:
        counts[lc.label] += 1
    total = sum(counts.values())
    if total:
        shares = {e: counts[e] / total for e in CANONICAL_ORDER}
    else:
        shares = {e: 0.0 for e in CANONICAL_ORDER}
    return LabelDistribution(counts, total, shares)


def distribution_from_counts(counts: dict[Emotion, int]) -> LabelDistribution:
    """Build a LabelDistribution directly from per-emotion counts."""
    full = {e: int(counts.get(e, 0)) for e in CANONICAL_ORDER}
    total = sum(full.values())
    shares = (
        {e: full[e] / total for e in CANONICAL_ORDER}
        if total
        else {e: 0.0 for e in CANONICAL_ORDER}
    )
    return LabelDistribution(full, total, shares)


# --------------------------------------------------------------------------
# Synthetic corpus
# --------------------------------------------------------------------------

# Built-in English-like vocabulary. Each template is a 3-slot phrase with
# exactly one None marking the subjective slot; slot words are unique per
# emotion and never appear in post (objective) text.
DEFAULT_TEMPLATES: dict[Emotion, list[tuple[str | None, ...]]] = {
    Emotion.ANGRY: [("people", "are", None), (None, "these", "politicians")],
    Emotion.HAHA: [("that", "looks", None), ("happy", "bday", None)],
    Emotion.WOW: [("what", "a", None), ("simply", None, "omg")],
    Emotion.SAD: [("my", "heart", None), ("prayers", "for", None)],
    Emotion.LOVE: [("god", "bless", None), ("sending", None, "hugs")],
}

DEFAULT_SLOT_WORDS: dict[Emotion, list[str]] = {
    Emotion.ANGRY: ["dumb", "stupid", "evil", "corrupt", "greedy", "shameless"],
    Emotion.HAHA: ["funny", "silly", "goofy", "hilarious", "ridiculous", "wacky"],
    Emotion.WOW: ["shock", "surprise", "marvel", "wonder", "spectacle", "miracle"],
    Emotion.SAD: ["aches", "breaks", "hurts", "weeps", "mourns", "sinks"],
    Emotion.LOVE: ["warmth", "kindness", "sweethearts", "darlings", "angels", "dears"],
}

DEFAULT_OBJECTIVE_VOCAB = [
    "the", "report", "said", "today", "officials", "announced", "meeting",
    "budget", "city", "council", "plan", "statement", "committee", "press",
    "update", "agency", "minister", "figures", "quarter", "region",
]


@dataclass
class SynthConfig:
    """Knobs for the deterministic synthetic corpus."""

    comments_per_emotion: int = 200
    sarcasm_rate: float = 0.0
    n_posts: int = 40
    post_len: int = 8
    filler_range: tuple[int, int] = (2, 4)
    lang: str = "en"
    templates: dict[Emotion, list[tuple[str | None, ...]]] = field(
        default_factory=lambda: {e: list(v) for e, v in DEFAULT_TEMPLATES.items()}
    )
    slot_words: dict[Emotion, list[str]] = field(
        default_factory=lambda: {e: list(v) for e, v in DEFAULT_SLOT_WORDS.items()}
    )
    objective_vocab: list[str] = field(
        default_factory=lambda: list(DEFAULT_OBJECTIVE_VOCAB)
    )


def planted_patterns(config: SynthConfig) -> dict[Emotion, list[tuple[str, ...]]]:
    """The wildcard pattern each template should surface as after mining."""
    out: dict[Emotion, list[tuple[str, ...]]] = {}
    for emo, templates in config.templates.items():
        out[emo] = [
            tuple("*" if w is None else w for w in t) for t in templates
        ]
    return out


def _render_phrase(template, slot_pool, rng) -> list[str]:
    return [rng.choice(slot_pool) if w is None else w for w in template]


def synth_corpus(config: SynthConfig, seed: int):
    """Deterministic synthetic corpus: (posts, labeled comments, sarcastic ids).

    Every non-sarcastic comment embeds one phrase planted for its own label
    plus objective filler words shared with the posts. Sarcastic comments
    mix an Angry-planted and a Haha-planted phrase and are labeled Angry or
    Haha at random; their ids are returned in the injection log.
    """
    for emo in CANONICAL_ORDER:
        if not config.templates.get(emo) or not config.slot_words.get(emo):
            raise ConfigError(f"empty synthetic vocabulary for emotion {emo}")
    if not 0.0 <= config.sarcasm_rate <= 1.0:
        raise ConfigError("sarcasm_rate must lie in [0, 1]")

    rng = random.Random(seed)

    posts = []
    for i in range(config.n_posts):
        words = [rng.choice(config.objective_vocab) for _ in range(config.post_len)]
        posts.append(NewsPost(f"p{i:05d}", " ".join(words), config.lang))

    lo, hi = config.filler_range
    labeled: list[LabeledComment] = []
    sarcastic_ids: set[str] = set()
    serial = 0
    for emo in CANONICAL_ORDER:
        for _ in range(config.comments_per_emotion):
            cid = f"c{serial:07d}"
            serial += 1
            fillers = [
                rng.choice(config.objective_vocab)
                for _ in range(rng.randint(lo, hi))
            ]
            sarcastic = rng.random() < config.sarcasm_rate
            if sarcastic:
                angry = _render_phrase(
                    rng.choice(config.templates[Emotion.ANGRY]),
                    config.slot_words[Emotion.ANGRY], rng)
                haha = _render_phrase(
                    rng.choice(config.templates[Emotion.HAHA]),
                    config.slot_words[Emotion.HAHA], rng)
                words = fillers + angry + haha
                label = rng.choice([Emotion.ANGRY, Emotion.HAHA])
                sarcastic_ids.add(cid)
            else:
                phrase = _render_phrase(
                    rng.choice(config.templates[emo]), config.slot_words[emo], rng)
                cut = rng.randint(0, len(fillers))
                words = fillers[:cut] + phrase + fillers[cut:]
                label = emo
            post = posts[rng.randrange(len(posts))] if posts else None
            comment = RawComment(
                id=cid,
                post_id=post.id if post else "p0",
                user_id=f"u{serial:07d}",
                text=" ".join(words),
                lang=config.lang,
            )
            labeled.append(LabeledComment(comment, label))
    return posts, labeled, sarcastic_ids


def reactions_for(labeled) -> list[ReactionEvent]:
    """Reaction events that would reproduce these labels via overlap_join."""
    return [
        ReactionEvent(lc.comment.post_id, lc.comment.user_id, lc.label)
        for lc in labeled
    ]


# --------------------------------------------------------------------------
# Writers
# --------------------------------------------------------------------------

def save_comments(comments, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for c in comments:
            fh.write(f"{c.id}\t{c.post_id}\t{c.user_id}\t{c.lang}\t{c.text}\n")


def save_posts(posts, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for p in posts:
            fh.write(f"{p.id}\t{p.lang}\t{p.text}\n")


def save_reactions(reactions, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for r in reactions:
            fh.write(f"{r.post_id}\t{r.user_id}\t{r.reaction.value}\n")


def save_labeled(labeled, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for lc in labeled:
            c = lc.comment
            fh.write(
                f"{c.id}\t{c.post_id}\t{c.user_id}\t{c.lang}\t{lc.label.value}\t{c.text}\n"
            )


def load_labeled(path) -> list[LabeledComment]:
    labeled = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            cid, post_id, user_id, lang, label, text = line.split("\t", 5)
            labeled.append(
                LabeledComment(RawComment(cid, post_id, user_id, text, lang),
                               parse_emotion(label))
            )
    return labeled


def format_distribution(dist: LabelDistribution) -> str:
    """Machine-readable `emotion<TAB>count<TAB>share` lines plus a total."""
    lines = [
        f"{e.value}\t{dist.counts[e]}\t{dist.shares[e]:.6f}"
        for e in CANONICAL_ORDER
    ]
    lines.append(f"total\t{dist.total}\t1.000000" if dist.total else "total\t0\t0.000000")
    return "\n".join(lines) + "\n"
