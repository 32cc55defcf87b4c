"""ROUGE-N / ROUGE-SU scoring under exact or embedding-based word matching.

The classic metrics count clipped n-gram overlap; the embedding variants
replace the 0/1 word-identity test with cosine similarity of composed
n-gram vectors, scored through a greedy one-to-one soft assignment.
Matching never crosses unit types: unigrams pair with unigrams, bigrams
with bigrams, so the embedding metrics reduce exactly to the classic ones
when the similarity degenerates to an identity test.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from statistics import fmean
from typing import Callable, Sequence

import numpy as np

from .embeddings import EmbeddingTable, similarity
from .textpipe import NGram, NGramMultiset, TokenSequence, extract_ngrams, extract_skip_bigrams

OOV_POLICIES = ("zero", "exact-fallback")
MULTIREF_POLICIES = ("average", "jackknife")


def f_exact(w1: NGram, w2: NGram) -> float:
    """1 when the word lists are equal element-wise, else 0. Gaps are ignored."""
    return 1.0 if w1.words == w2.words else 0.0


def f_we(w1: NGram, w2: NGram, table: EmbeddingTable, oov_policy: str = "zero") -> float:
    """Cosine similarity of the composed n-gram vectors.

    When either side is out of vocabulary (including zero products of
    composition), the result is 0 under the ``zero`` policy or falls back
    to exact matching under ``exact-fallback``.
    """
    v1 = table.compose(w1.words)
    v2 = table.compose(w2.words)
    if v1 is None or v2 is None:
        return f_exact(w1, w2) if oov_policy == "exact-fallback" else 0.0
    return similarity(v1, v2)


class MatchFunction:
    """Pluggable word/n-gram similarity: exact identity or embedding cosine.

    Immutable once built; embedding composition results are memoized, and
    since the underlying table never changes the instance is safe to share
    across concurrent scorers.
    """

    def __init__(self, kind: str, table: EmbeddingTable | None = None, oov_policy: str = "zero"):
        if kind not in ("exact", "embedding"):
            raise ValueError(f"unknown match kind {kind!r}")
        if kind == "embedding" and table is None:
            raise ValueError("embedding match requires an embedding table")
        if oov_policy not in OOV_POLICIES:
            raise ValueError(f"unknown oov policy {oov_policy!r}")
        self.kind = kind
        self.table = table
        self.oov_policy = oov_policy
        self._compose_cache: dict[tuple[str, ...], np.ndarray | None] = {}

    @classmethod
    def exact(cls) -> "MatchFunction":
        return cls("exact")

    @classmethod
    def we(cls, table: EmbeddingTable, oov_policy: str = "zero") -> "MatchFunction":
        return cls("embedding", table=table, oov_policy=oov_policy)

    def compose(self, words: tuple[str, ...]) -> np.ndarray | None:
        if words not in self._compose_cache:
            self._compose_cache[words] = self.table.compose(words)
        return self._compose_cache[words]

    def similarity(self, w1: NGram, w2: NGram) -> float:
        if self.kind == "exact":
            return f_exact(w1, w2)
        v1 = self.compose(w1.words)
        v2 = self.compose(w2.words)
        if v1 is None or v2 is None:
            return f_exact(w1, w2) if self.oov_policy == "exact-fallback" else 0.0
        return similarity(v1, v2)


@dataclass(frozen=True)
class RougeVariant:
    """Which units get compared: contiguous n-grams or skip-bigrams (+unigrams)."""

    family: str  # "n" | "su"
    n: int = 0
    max_skip: int = 0
    include_unigrams: bool = True

    def __post_init__(self):
        if self.family == "n":
            if self.n < 1:
                raise ValueError("family 'n' requires n >= 1")
        elif self.family == "su":
            if self.max_skip < 0:
                raise ValueError("family 'su' requires max_skip >= 0")
        else:
            raise ValueError(f"unknown family {self.family!r}")

    @classmethod
    def parse(cls, name: str) -> "RougeVariant":
        """Parse names like rouge-1, rouge-2, rouge-su4."""
        m = re.fullmatch(r"rouge-(\d+)", name.strip().lower())
        if m:
            return cls(family="n", n=int(m.group(1)))
        m = re.fullmatch(r"rouge-su(\d+)", name.strip().lower())
        if m:
            return cls(family="su", max_skip=int(m.group(1)))
        raise ValueError(f"unknown ROUGE variant {name!r}")

    @property
    def name(self) -> str:
        if self.family == "n":
            return f"rouge-{self.n}"
        return f"rouge-su{self.max_skip}"


ROUGE_1 = RougeVariant(family="n", n=1)
ROUGE_2 = RougeVariant(family="n", n=2)
ROUGE_SU4 = RougeVariant(family="su", max_skip=4)
DEFAULT_VARIANTS = (ROUGE_1, ROUGE_2, ROUGE_SU4)


def extract_units(seq: TokenSequence, variant: RougeVariant) -> NGramMultiset:
    """The multiset a variant scores over; SU pools skip-bigrams with unigrams."""
    if variant.family == "n":
        return extract_ngrams(seq, variant.n)
    units = extract_skip_bigrams(seq, variant.max_skip)
    if variant.include_unigrams:
        units = units.union(extract_ngrams(seq, 1))
    return units


@dataclass(frozen=True)
class RougeScore:
    recall: float
    precision: float
    f1: float
    soft_match_count: float
    ref_total: int
    cand_total: int

    @classmethod
    def from_counts(cls, soft: float, ref_total: int, cand_total: int) -> "RougeScore":
        if soft > min(ref_total, cand_total) + 1e-9:
            raise ValueError(f"match count {soft} exceeds clip bound {min(ref_total, cand_total)}")
        recall = soft / ref_total if ref_total > 0 else 0.0
        precision = soft / cand_total if cand_total > 0 else 0.0
        f1 = 2 * recall * precision / (recall + precision) if recall + precision > 0 else 0.0
        return cls(recall, precision, f1, soft, ref_total, cand_total)


def _group_by_length(multiset: NGramMultiset) -> dict[int, list[tuple[tuple[str, ...], int]]]:
    """words -> count groups (gaps merged), partitioned by unit length, sorted."""
    partitions: dict[int, dict[tuple[str, ...], int]] = {}
    for words, count in multiset.by_words().items():
        partitions.setdefault(len(words), {})[words] = count
    return {
        length: sorted(groups.items())
        for length, groups in sorted(partitions.items())
    }


def _greedy_consume(
    pairs: list[tuple[float, tuple[str, ...], tuple[str, ...]]],
    ref_counts: dict[tuple[str, ...], int],
    cand_counts: dict[tuple[str, ...], int],
) -> float:
    """Best-first one-to-one assignment over grouped instances.

    Pairs are taken in descending similarity, ties broken by n-gram order
    (reference side first). All instances within a group are identical, so
    consuming min(remaining) per group equals instance-level greedy.
    """
    pairs.sort(key=lambda p: (-p[0], p[1], p[2]))
    rem_ref = dict(ref_counts)
    rem_cand = dict(cand_counts)
    total = 0.0
    for sim, ref_words, cand_words in pairs:
        take = min(rem_ref[ref_words], rem_cand[cand_words])
        if take:
            total += take * sim
            rem_ref[ref_words] -= take
            rem_cand[cand_words] -= take
    return total


def greedy_soft_overlap(
    cand: NGramMultiset,
    ref: NGramMultiset,
    simfn: Callable[[NGram, NGram], float],
) -> float:
    """Reference greedy engine over an arbitrary similarity callable.

    Enumerates every same-length (ref, cand) group pair with positive
    similarity. Quadratic in group counts; the embedding fast path in
    soft_overlap computes the same assignment with matrix products.
    """
    total = 0.0
    cand_parts = _group_by_length(cand)
    for length, ref_groups in _group_by_length(ref).items():
        cand_groups = cand_parts.get(length)
        if not cand_groups:
            continue
        pairs = []
        for ref_words, _ in ref_groups:
            for cand_words, _ in cand_groups:
                sim = simfn(NGram(ref_words), NGram(cand_words))
                if sim > 0.0:
                    pairs.append((sim, ref_words, cand_words))
        total += _greedy_consume(pairs, dict(ref_groups), dict(cand_groups))
    return total


def _exact_overlap(cand: NGramMultiset, ref: NGramMultiset) -> float:
    cand_counts = cand.by_words()
    return float(sum(
        min(count, cand_counts[words])
        for words, count in ref.by_words().items()
        if words in cand_counts
    ))


def _embedding_overlap(cand: NGramMultiset, ref: NGramMultiset, match: MatchFunction) -> float:
    total = 0.0
    cand_parts = _group_by_length(cand)
    for length, ref_groups in _group_by_length(ref).items():
        cand_groups = cand_parts.get(length)
        if not cand_groups:
            continue
        ref_vecs = [(words, match.compose(words)) for words, _ in ref_groups]
        cand_vecs = [(words, match.compose(words)) for words, _ in cand_groups]
        ref_known = [(words, v) for words, v in ref_vecs if v is not None]
        cand_known = [(words, v) for words, v in cand_vecs if v is not None]

        pairs: list[tuple[float, tuple[str, ...], tuple[str, ...]]] = []
        if ref_known and cand_known:
            sims = np.clip(
                np.stack([v for _, v in ref_known]).astype(np.float64)
                @ np.stack([v for _, v in cand_known]).astype(np.float64).T,
                0.0, 1.0,
            )
            for i, j in np.argwhere(sims > 0.0):
                pairs.append((float(sims[i, j]), ref_known[i][0], cand_known[j][0]))
        if match.oov_policy == "exact-fallback":
            cand_oov = {words for words, v in cand_vecs if v is None}
            for words, v in ref_vecs:
                if v is None and words in cand_oov:
                    pairs.append((1.0, words, words))
        total += _greedy_consume(pairs, dict(ref_groups), dict(cand_groups))
    return total


def soft_overlap(cand: NGramMultiset, ref: NGramMultiset, match: MatchFunction) -> float:
    """Soft match count between two unit multisets.

    Exact matching is clipped duplicate counting; embedding matching runs
    the greedy best-first assignment (which reduces to clipped counting
    when similarities are 0/1 indicators).
    """
    if match.kind == "exact":
        return _exact_overlap(cand, ref)
    return _embedding_overlap(cand, ref, match)


def _mean_scores(scores: Sequence[RougeScore]) -> RougeScore:
    if len(scores) == 1:
        return scores[0]
    return RougeScore(
        recall=fmean(s.recall for s in scores),
        precision=fmean(s.precision for s in scores),
        f1=fmean(s.f1 for s in scores),
        soft_match_count=fmean(s.soft_match_count for s in scores),
        ref_total=round(fmean(s.ref_total for s in scores)),
        cand_total=scores[0].cand_total,
    )


def rouge_score(
    cand: TokenSequence,
    refs: Sequence[TokenSequence],
    variant: RougeVariant,
    match: MatchFunction,
    multiref: str = "average",
) -> RougeScore:
    """Score one candidate against one or more references.

    Per-reference triples are combined per the multiref policy: ``average``
    is the component-wise mean; ``jackknife`` averages, over leave-one-out
    folds, the best per-reference score in each fold (best by f1, then
    recall, then precision). A single reference makes both policies the
    plain single-reference score.
    """
    if not refs:
        raise ValueError("at least one reference is required")
    if multiref not in MULTIREF_POLICIES:
        raise ValueError(f"unknown multiref policy {multiref!r}")

    cand_units = extract_units(cand, variant)
    per_ref = []
    for ref in refs:
        ref_units = extract_units(ref, variant)
        soft = soft_overlap(cand_units, ref_units, match)
        per_ref.append(RougeScore.from_counts(soft, ref_units.total, cand_units.total))

    if multiref == "average" or len(per_ref) == 1:
        return _mean_scores(per_ref)
    folds = []
    for left_out in range(len(per_ref)):
        fold = [s for i, s in enumerate(per_ref) if i != left_out]
        folds.append(max(fold, key=lambda s: (s.f1, s.recall, s.precision)))
    return _mean_scores(folds)
