"""Synthetic corpora with an exactly planted homophily level.

The construction is arithmetic, not sampled. The target level p is
turned into integer edge weights w_s / w_c with w_s / (w_s + w_c) = p.
Users of each label form a ring of same-label edges (weight w_s), and
one global ring over an interleaved user order supplies cross-label
edges (weight w_c). Every node then carries same-label incident weight
2 w_s and cross-label incident weight 2 w_c, so its homophily is
exactly p, and so is every per-label mean.

Each user also gets marker tweets matching a purpose-built dictionary
so the full pipeline recovers the planted labels; retweet records carry
keyword-only filler text that matches nothing.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .errors import SynthesisError
from .lexicon import (
    BASIC_FOUNDATIONS,
    Foundation,
    MatchMode,
    MoralLexicon,
    MoralTerm,
    Polarity,
)
from .textprep import DEFAULT_KEYWORDS, KNOWN_LANGS, LANG_EN, TweetRecord

_WEIGHT_DENOMINATOR_LIMIT = 100


def _marker(foundation: Foundation, polarity: Polarity) -> str:
    suffix = "good" if polarity is Polarity.VIRTUE else "bad"
    return f"{foundation.value}{suffix}"


@dataclass(frozen=True)
class SyntheticSpec:
    """Parameters of one planted corpus."""

    num_users: int
    homophily: float
    num_labels: int = 5
    tweets_per_user: int = 3
    seed: int = 0
    lang: str = LANG_EN

    def __post_init__(self) -> None:
        if self.num_users < 2:
            raise SynthesisError(f"need at least 2 users, got {self.num_users}")
        if not 2 <= self.num_labels <= len(BASIC_FOUNDATIONS):
            raise SynthesisError(
                f"num_labels must be in 2..{len(BASIC_FOUNDATIONS)}, "
                f"got {self.num_labels}"
            )
        if self.num_users < self.num_labels:
            raise SynthesisError(
                f"{self.num_users} users cannot populate "
                f"{self.num_labels} labels"
            )
        if not 0.0 <= self.homophily <= 1.0:
            raise SynthesisError(
                f"homophily must be within [0, 1], got {self.homophily}"
            )
        if self.tweets_per_user < 2:
            raise SynthesisError(
                "tweets_per_user must be >= 2, otherwise every user is "
                "dropped by the profile filter"
            )
        if self.lang not in KNOWN_LANGS:
            raise SynthesisError(f"unknown language {self.lang!r}")

    @property
    def keyword(self) -> str:
        return DEFAULT_KEYWORDS[self.lang][0]


@dataclass(frozen=True)
class SyntheticCorpus:
    """A generated corpus plus everything needed to verify it."""

    spec: SyntheticSpec
    records: tuple[TweetRecord, ...]
    lexicon: MoralLexicon
    labels: dict[str, Foundation]
    edges: tuple[tuple[str, str, int], ...]
    same_weight: int
    cross_weight: int
    achieved_homophily: Fraction

    def truth(self) -> dict:
        """Ground-truth sidecar content."""
        return {
            "achieved_homophily": float(self.achieved_homophily),
            "achieved_homophily_exact": str(self.achieved_homophily),
            "cross_weight": self.cross_weight,
            "labels": {u: f.value for u, f in sorted(self.labels.items())},
            "lang": self.spec.lang,
            "num_labels": self.spec.num_labels,
            "num_users": self.spec.num_users,
            "same_weight": self.same_weight,
            "seed": self.spec.seed,
            "target_homophily": self.spec.homophily,
            "tweets_per_user": self.spec.tweets_per_user,
        }


def _split_weights(p: float) -> tuple[int, int]:
    frac = Fraction(p).limit_denominator(_WEIGHT_DENOMINATOR_LIMIT)
    return frac.numerator, frac.denominator - frac.numerator


def _planted_edges(
    users: list[str],
    labels: dict[str, Foundation],
    num_labels: int,
    w_same: int,
    w_cross: int,
) -> dict[tuple[str, str], int]:
    n = len(users)
    acc: dict[tuple[str, str], int] = {}

    def add(a: str, b: str, w: int) -> None:
        key = (a, b) if a < b else (b, a)
        acc[key] = acc.get(key, 0) + w

    if w_same > 0:
        for c in range(num_labels):
            members = [users[i] for i in range(c, n, num_labels)]
            if len(members) < 2:
                raise SynthesisError(
                    f"label class of size {len(members)} cannot carry "
                    "same-label edges; raise num_users to at least "
                    f"{2 * num_labels}"
                )
            m = len(members)
            for i in range(m):
                add(members[i], members[(i + 1) % m], w_same)

    if w_cross > 0:
        order = list(range(n))
        wrap_clash = (n - 1) % num_labels == 0
        if wrap_clash:
            if num_labels >= 3:
                # swapping the last two users fixes the wrap adjacency
                order[-1], order[-2] = order[-2], order[-1]
            elif n % 2 == 1 and w_same > 0:
                raise SynthesisError(
                    "two labels with an odd user count cannot balance "
                    "cross-label weight exactly; use an even num_users"
                )
        for i in range(n):
            a = order[i]
            b = order[(i + 1) % n]
            if labels[users[a]] is labels[users[b]]:
                # only reachable for two labels with odd n and w_same 0;
                # reroute the wrap edge, balance is irrelevant there
                b = order[1]
            add(users[a], users[b], w_cross)
    return acc


def generate_synthetic(spec: SyntheticSpec) -> SyntheticCorpus:
    """Build records, dictionary, and ground truth for one spec."""
    rng = random.Random(spec.seed)
    foundations = list(BASIC_FOUNDATIONS[: spec.num_labels])
    rng.shuffle(foundations)

    width = max(5, len(str(spec.num_users - 1)))
    users = [f"u{i:0{width}d}" for i in range(spec.num_users)]
    labels = {
        users[i]: foundations[i % spec.num_labels]
        for i in range(spec.num_users)
    }

    w_same, w_cross = _split_weights(spec.homophily)
    achieved = Fraction(w_same, w_same + w_cross)
    edge_acc = _planted_edges(users, labels, spec.num_labels, w_same, w_cross)
    edges = tuple(sorted((a, b, w) for (a, b), w in edge_acc.items()))

    mode = (
        MatchMode.TOKEN_PREFIX
        if spec.lang == LANG_EN
        else MatchMode.SUBSTRING_LONGEST
    )
    terms = tuple(
        MoralTerm(
            surface=_marker(f, polarity),
            is_stem=False,
            categories=frozenset({(f, polarity)}),
        )
        for f in BASIC_FOUNDATIONS[: spec.num_labels]
        for polarity in (Polarity.VIRTUE, Polarity.VICE)
    )
    lexicon = MoralLexicon(
        terms=terms, match_mode=mode, language_tag=spec.lang
    )

    records: list[TweetRecord] = []
    counter = 0

    def next_id() -> str:
        nonlocal counter
        counter += 1
        return f"t{counter:08d}"

    first_tweet: dict[str, str] = {}
    for u in users:
        f = labels[u]
        for k in range(spec.tweets_per_user):
            polarity = Polarity.VIRTUE if k % 2 == 0 else Polarity.VICE
            tid = next_id()
            first_tweet.setdefault(u, tid)
            records.append(
                TweetRecord(
                    id=tid,
                    user_id=u,
                    text=f"{spec.keyword} {_marker(f, polarity)}",
                    lang=spec.lang,
                    timestamp=counter,
                )
            )
    for a, b, w in edges:
        for _ in range(w):
            records.append(
                TweetRecord(
                    id=next_id(),
                    user_id=a,
                    text=spec.keyword,
                    lang=spec.lang,
                    timestamp=counter,
                    retweet_of_user_id=b,
                    retweet_of_tweet_id=first_tweet[b],
                )
            )

    return SyntheticCorpus(
        spec=spec,
        records=tuple(records),
        lexicon=lexicon,
        labels=labels,
        edges=edges,
        same_weight=w_same,
        cross_weight=w_cross,
        achieved_homophily=achieved,
    )


def iter_expected_label_scores(
    corpus: SyntheticCorpus,
) -> Iterator[tuple[Foundation, float]]:
    """The per-label homophily the construction plants."""
    populated = set(corpus.labels.values())
    for f in BASIC_FOUNDATIONS:
        if f in populated:
            yield f, float(corpus.achieved_homophily)
