"""Per-tweet moral loading vectors and label assignment.

A tweet's loading along each basic foundation is the fraction of its
dictionary-matched moral word instances that belong to that foundation,
virtue and vice entries combined. General-morality matches count toward
neither numerator nor denominator. Loadings are stored as exact integer
counts so equality tests never depend on float rounding.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import DataError
from .lexicon import (
    BASIC_FOUNDATIONS,
    Foundation,
    MatchMode,
    MoralLexicon,
    MoralTerm,
    match_substring,
    match_tokens,
)
from .textprep import CleanText, KNOWN_LANGS, TweetRecord, preprocess

FOUNDATION_INDEX = {f: i for i, f in enumerate(BASIC_FOUNDATIONS)}

COUNTING_MODES = ("multiset", "set")


@dataclass(frozen=True)
class MoralLoadingVector:
    """Integer match counts per basic foundation plus the matched total.

    ``values`` derives the float loading vector; with no matches it is all
    zeros and the tweet is filtered downstream.
    """

    counts: tuple[int, int, int, int, int]
    matched_word_count: int

    def __post_init__(self):
        if len(self.counts) != 5:
            raise ValueError("loading vector needs exactly five counts")
        if self.matched_word_count < 0 or any(c < 0 for c in self.counts):
            raise ValueError("negative counts are not allowed")
        if self.matched_word_count == 0 and any(self.counts):
            raise ValueError("nonzero counts with zero matched words")
        if any(c > self.matched_word_count for c in self.counts):
            raise ValueError("foundation count exceeds matched word total")

    @property
    def values(self) -> tuple[float, float, float, float, float]:
        if self.matched_word_count == 0:
            return (0.0, 0.0, 0.0, 0.0, 0.0)
        n = self.matched_word_count
        return tuple(c / n for c in self.counts)  # type: ignore[return-value]

    @property
    def is_zero(self) -> bool:
        return self.matched_word_count == 0


ZERO_LOADING = MoralLoadingVector(counts=(0, 0, 0, 0, 0), matched_word_count=0)


@dataclass(frozen=True)
class MoralScoredTweet:
    """A kept tweet: its record, loading vector and non-empty label set."""

    tweet: TweetRecord
    loading: MoralLoadingVector
    labels: frozenset[Foundation]

    @property
    def id(self) -> str:
        return self.tweet.id

    @property
    def user_id(self) -> str:
        return self.tweet.user_id

    @property
    def lang(self) -> str:
        return self.tweet.lang


@dataclass(frozen=True)
class ScoredRow:
    """Slim scored record, as read back from a scored JSONL file."""

    id: str
    user_id: str
    lang: str
    loading: MoralLoadingVector
    labels: frozenset[Foundation]


@dataclass
class FilterStats:
    """Commutative per-language bookkeeping for a scoring pass."""

    read: Counter = field(default_factory=Counter)
    kept: Counter = field(default_factory=Counter)
    skipped: int = 0

    def merge(self, other: "FilterStats") -> "FilterStats":
        self.read.update(other.read)
        self.kept.update(other.kept)
        self.skipped += other.skipped
        return self

    def to_dict(self) -> dict:
        return {
            "read": {k: self.read[k] for k in sorted(self.read)},
            "kept": {k: self.kept[k] for k in sorted(self.kept)},
            "skipped": self.skipped,
        }


def moral_loading(
    clean: CleanText, lex: MoralLexicon, counting: str = "multiset"
) -> MoralLoadingVector:
    """Count dictionary matches and build the loading vector.

    ``counting="multiset"`` counts every matched instance; ``"set"``
    counts each distinct term at most once per tweet.
    """
    if counting not in COUNTING_MODES:
        raise ValueError(f"counting must be one of {COUNTING_MODES}")
    if lex.match_mode is MatchMode.TOKEN_PREFIX:
        matches = match_tokens(lex, clean.tokens) if clean.tokens else []
    else:
        matches = (
            match_substring(lex, clean.normalized_text) if clean.normalized_text else []
        )

    terms: Iterable[MoralTerm] = (t for _, t in matches)
    if counting == "set":
        seen: set[tuple[str, bool]] = set()
        deduped = []
        for t in terms:
            key = (t.surface, t.is_stem)
            if key not in seen:
                seen.add(key)
                deduped.append(t)
        terms = deduped

    counts = [0, 0, 0, 0, 0]
    total = 0
    for term in terms:
        basics = term.basic_foundations
        if not basics:
            continue  # general-morality-only entry
        total += 1
        for f in basics:
            counts[FOUNDATION_INDEX[f]] += 1
    return MoralLoadingVector(counts=tuple(counts), matched_word_count=total)


def label_tweet(loading: MoralLoadingVector) -> frozenset[Foundation] | None:
    """Full argmax label set; None when nothing matched.

    Ties yield multi-label sets. Comparison happens on the integer counts,
    which share one denominator, so it is exact.
    """
    if loading.matched_word_count == 0:
        return None
    top = max(loading.counts)
    return frozenset(
        BASIC_FOUNDATIONS[i] for i, c in enumerate(loading.counts) if c == top
    )


def score_record(
    rec: TweetRecord,
    lex: MoralLexicon,
    stopwords: frozenset[str],
    counting: str = "multiset",
) -> MoralScoredTweet | None:
    clean = preprocess(rec, stopwords)
    loading = moral_loading(clean, lex, counting)
    labels = label_tweet(loading)
    if labels is None:
        return None
    return MoralScoredTweet(tweet=rec, loading=loading, labels=labels)


def score_corpus(
    records: Iterable[TweetRecord],
    lexicons: dict[str, MoralLexicon],
    *,
    stopwords: frozenset[str] = frozenset(),
    counting: str = "multiset",
    stats: FilterStats | None = None,
) -> Iterator[MoralScoredTweet]:
    """Score a record stream, yielding only tweets with at least one match.

    Records whose language has no lexicon are counted as skipped, never
    fatal. ``stats`` is updated in place while the generator runs.
    """
    if stats is None:
        stats = FilterStats()
    for rec in records:
        if rec.lang not in KNOWN_LANGS or rec.lang not in lexicons:
            stats.skipped += 1
            continue
        stats.read[rec.lang] += 1
        scored = score_record(rec, lexicons[rec.lang], stopwords, counting)
        if scored is not None:
            stats.kept[rec.lang] += 1
            yield scored


def scored_to_json(s: MoralScoredTweet) -> str:
    obj = {
        "id": s.id,
        "user_id": s.user_id,
        "lang": s.lang,
        "counts": list(s.loading.counts),
        "matched": s.loading.matched_word_count,
        "loading": list(s.loading.values),
        "labels": sorted(f.value for f in s.labels),
    }
    return json.dumps(obj, ensure_ascii=False, sort_keys=True)


def scored_row_from_json(line: str, lineno: int | None = None) -> ScoredRow:
    where = f"line {lineno}: " if lineno is not None else ""
    try:
        obj = json.loads(line)
        loading = MoralLoadingVector(
            counts=tuple(int(c) for c in obj["counts"]),
            matched_word_count=int(obj["matched"]),
        )
        return ScoredRow(
            id=str(obj["id"]),
            user_id=str(obj["user_id"]),
            lang=str(obj["lang"]),
            loading=loading,
            labels=frozenset(Foundation(v) for v in obj["labels"]),
        )
    except (json.JSONDecodeError, KeyError, ValueError, TypeError) as exc:
        raise DataError(f"{where}bad scored record: {exc}") from None
