"""Text normalization and n-gram / skip-bigram extraction.

Everything here is pure: the same raw text and config always produce the
same tokens, and extraction output depends only on the token sequence.
"""

from __future__ import annotations

import string
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, NamedTuple

from ._porter import porter_stem

_STRIP_CHARS = string.punctuation + "‘’“”–—…"


@dataclass(frozen=True)
class TokenizeConfig:
    """Normalization switches applied by :func:`tokenize`.

    ``stopwords`` is a frozenset of already-normalized words; use
    :func:`load_stopwords` to read one from a file.
    """

    lowercase: bool = True
    stem: bool = False
    stopwords: frozenset[str] | None = None


DEFAULT_CONFIG = TokenizeConfig()


@dataclass(frozen=True)
class TokenSequence:
    """Normalized word tokens of one summary text, in original order."""

    tokens: tuple[str, ...]
    source_id: str = ""

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self) -> Iterator[str]:
        return iter(self.tokens)


class NGram(NamedTuple):
    """An n-gram unit: ordered words plus the skipped distance.

    ``gap`` is 0 for contiguous n-grams; for skip-bigrams it records how
    many words were skipped between the two tokens. Only length-2 grams
    may carry a positive gap.
    """

    words: tuple[str, ...]
    gap: int = 0


@dataclass
class NGramMultiset:
    """Multiset of n-grams with occurrence counts."""

    entries: Counter[NGram] = field(default_factory=Counter)

    @property
    def total(self) -> int:
        return sum(self.entries.values())

    def add(self, gram: NGram, count: int = 1) -> None:
        self.entries[gram] += count

    def by_words(self) -> dict[tuple[str, ...], int]:
        """Counts aggregated over the gap field (match identity is words-only)."""
        agg: dict[tuple[str, ...], int] = {}
        for gram, count in self.entries.items():
            agg[gram.words] = agg.get(gram.words, 0) + count
        return agg

    def union(self, other: "NGramMultiset") -> "NGramMultiset":
        merged = Counter(self.entries)
        merged.update(other.entries)
        return NGramMultiset(merged)


def load_stopwords(path: str | Path, lowercase: bool = True) -> frozenset[str]:
    """Read a stopword list: one word per line, blanks ignored."""
    words = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        word = line.strip()
        if word:
            words.append(word.lower() if lowercase else word)
    return frozenset(words)


def tokenize(raw: str, config: TokenizeConfig = DEFAULT_CONFIG, source_id: str = "") -> TokenSequence:
    """Split raw text into normalized word tokens.

    Tokens are whitespace-delimited chunks with leading/trailing
    punctuation stripped; chunks that are pure punctuation disappear.
    Empty or whitespace-only input yields an empty sequence.
    """
    tokens: list[str] = []
    for chunk in raw.split():
        word = chunk.strip(_STRIP_CHARS)
        if not word:
            continue
        if config.lowercase:
            word = word.lower()
        if config.stopwords is not None and word in config.stopwords:
            continue
        if config.stem:
            word = porter_stem(word)
        tokens.append(word)
    return TokenSequence(tuple(tokens), source_id=source_id)


def extract_ngrams(seq: TokenSequence, n: int) -> NGramMultiset:
    """Contiguous n-grams of ``seq`` with multiplicity.

    Total count is max(0, len(seq) - n + 1); shorter sequences give an
    empty multiset.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    toks = seq.tokens
    counts: Counter[NGram] = Counter()
    for i in range(len(toks) - n + 1):
        counts[NGram(toks[i : i + n])] += 1
    return NGramMultiset(counts)


def extract_skip_bigrams(seq: TokenSequence, max_skip: int) -> NGramMultiset:
    """Ordered in-sentence word pairs with at most ``max_skip`` words between.

    Every pair (w_i, w_j) with i < j and j - i - 1 <= max_skip is
    included; the gap j - i - 1 is recorded on the gram.
    """
    if max_skip < 0:
        raise ValueError(f"max_skip must be >= 0, got {max_skip}")
    toks = seq.tokens
    counts: Counter[NGram] = Counter()
    for i in range(len(toks)):
        for j in range(i + 1, min(i + max_skip + 2, len(toks))):
            counts[NGram((toks[i], toks[j]), gap=j - i - 1)] += 1
    return NGramMultiset(counts)
