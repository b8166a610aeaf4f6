"""Text normalization, English tokenization and frequency-based Chinese segmentation.

Tokens are plain strings. A token is either a Word (contains at least one
alphanumeric character; CJK ideographs count as alphanumeric) or a Symbol
(a maximal run of punctuation / emoji). The wildcard slot of a mined
pattern is represented by the reserved surface "*".
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field

WILDCARD = "*"

_URL_RE = re.compile(r"(?:https?://|www\.)\S+")
_MENTION_RE = re.compile(r"@\w+")
_WS_RE = re.compile(r"\s+")


def is_symbol(token: str) -> bool:
    """True when the token is a punctuation/emoji run, not a word."""
    return bool(token) and not any(ch.isalnum() for ch in token)


def _is_punct_char(ch: str) -> bool:
    return not ch.isalnum() and not ch.isspace()


@dataclass
class TokenSeq:
    """Ordered tokens of one comment or post."""

    source_id: str = ""
    tokens: list[str] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.tokens)


def normalize(text: str) -> str:
    """Lowercase Latin, URL -> 'url', @mention -> 'user', collapse whitespace.

    CJK characters pass through untouched. Idempotent.
    """
    text = text.lower()
    text = _URL_RE.sub(" url ", text)
    text = _MENTION_RE.sub(" user ", text)
    return _WS_RE.sub(" ", text).strip()


def _split_chunk(chunk: str) -> list[str]:
    # Peel leading/trailing punctuation runs off a whitespace-delimited
    # chunk; interior punctuation (don't, well-known) stays in the word.
    i, j = 0, len(chunk)
    while i < j and _is_punct_char(chunk[i]):
        i += 1
    while j > i and _is_punct_char(chunk[j - 1]):
        j -= 1
    parts = []
    if i > 0:
        parts.append(chunk[:i])
    if j > i:
        parts.append(chunk[i:j])
    if j < len(chunk):
        parts.append(chunk[j:])
    return parts


def tokenize_en(text: str, source_id: str = "") -> TokenSeq:
    """Whitespace tokenization with punctuation runs split into Symbol tokens."""
    tokens: list[str] = []
    for chunk in text.split():
        tokens.extend(_split_chunk(chunk))
    return TokenSeq(source_id, tokens)


@dataclass
class ZhLexicon:
    """2-4 character words with frequency-subtraction adjusted counts."""

    entries: dict[str, int] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.entries)


def _word_runs(text: str):
    """Maximal runs of non-punctuation, non-whitespace characters."""
    run_start = None
    for i, ch in enumerate(text):
        if ch.isspace() or _is_punct_char(ch):
            if run_start is not None:
                yield text[run_start:i]
                run_start = None
        elif run_start is None:
            run_start = i
    if run_start is not None:
        yield text[run_start:]


def build_zh_lexicon(texts, threshold: int = 5) -> ZhLexicon:
    """Count 2/3/4-character substrings, subtract container frequencies.

    Adjustment: each 3-char word loses the raw frequency of every distinct
    4-char word containing it; each 2-char word loses the raw frequency of
    every distinct containing 3- and 4-char word. Negative adjusted counts
    clamp to 0. Entries with adjusted frequency >= threshold are kept.
    """
    if threshold < 1:
        raise ValueError("threshold must be a positive integer")
    raw: Counter[str] = Counter()
    for text in texts:
        for run in _word_runs(text):
            for n in (2, 3, 4):
                for i in range(len(run) - n + 1):
                    raw[run[i : i + n]] += 1

    penalty: Counter[str] = Counter()
    for word, freq in raw.items():
        if len(word) == 4:
            subs = {word[i : i + 3] for i in range(2)}
            subs |= {word[i : i + 2] for i in range(3)}
        elif len(word) == 3:
            subs = {word[i : i + 2] for i in range(2)}
        else:
            continue
        for sub in subs:
            penalty[sub] += freq

    entries = {}
    for word, freq in raw.items():
        adjusted = max(0, freq - penalty.get(word, 0))
        if adjusted >= threshold:
            entries[word] = adjusted
    return ZhLexicon(entries)


def segment_zh(text: str, lexicon: ZhLexicon, source_id: str = "") -> TokenSeq:
    """Greedy longest-match segmentation (4 > 3 > 2 chars) against the lexicon.

    Characters starting no lexicon entry come out as single-character Word
    tokens; punctuation runs become Symbol tokens. Whitespace is dropped.
    """
    entries = lexicon.entries
    tokens: list[str] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if _is_punct_char(ch):
            j = i + 1
            while j < n and _is_punct_char(text[j]):
                j += 1
            tokens.append(text[i:j])
            i = j
            continue
        for width in (4, 3, 2):
            candidate = text[i : i + width]
            if len(candidate) == width and candidate in entries:
                tokens.append(candidate)
                i += width
                break
        else:
            tokens.append(ch)
            i += 1
    return TokenSeq(source_id, tokens)


def save_lexicon(lexicon: ZhLexicon, path) -> None:
    """Write `word<TAB>adjusted_frequency` lines, descending frequency."""
    items = sorted(lexicon.entries.items(), key=lambda kv: (-kv[1], kv[0]))
    with open(path, "w", encoding="utf-8") as fh:
        for word, freq in items:
            fh.write(f"{word}\t{freq}\n")


def load_lexicon(path) -> ZhLexicon:
    entries = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            word, freq = line.split("\t")
            entries[word] = int(freq)
    return ZhLexicon(entries)
