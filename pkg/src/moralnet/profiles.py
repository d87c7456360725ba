"""Per-user moral profiles aggregated from labelled tweets.

A user's proportion along a foundation is the share of their morally
labelled tweets carrying that label. Multi-labelled tweets can either
count toward every label they carry (default) or be dropped.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Mapping, Protocol

from .lexicon import BASIC_FOUNDATIONS, Foundation

MULTILABEL_MODES = ("each", "drop")


class LabelledTweet(Protocol):
    user_id: str
    labels: frozenset[Foundation]


@dataclass(frozen=True)
class UserMoralProfile:
    """Counts of a user's labelled tweets per foundation.

    ``tweet_count`` is the number of distinct tweets aggregated;
    ``label_counts[j]`` how many of them carry foundation j. With
    multi-labels the counts can sum past the tweet count. ``label`` is
    set by assign_labels and only for users passing both retention rules.
    """

    user_id: str
    tweet_count: int
    label_counts: tuple[int, int, int, int, int]
    label: Foundation | None = None

    @property
    def proportions(self) -> tuple[float, float, float, float, float]:
        if self.tweet_count == 0:
            return (0.0, 0.0, 0.0, 0.0, 0.0)
        n = self.tweet_count
        return tuple(c / n for c in self.label_counts)  # type: ignore[return-value]


def build_profiles(
    scored: Iterable[LabelledTweet], multilabel: str = "each"
) -> dict[str, UserMoralProfile]:
    """Aggregate labelled tweets into per-user profiles, all users retained.

    The result is keyed and ordered by user_id, independent of stream order.
    """
    if multilabel not in MULTILABEL_MODES:
        raise ValueError(f"multilabel must be one of {MULTILABEL_MODES}")
    counts: dict[str, list[int]] = {}
    totals: dict[str, int] = {}
    for s in scored:
        if multilabel == "drop" and len(s.labels) > 1:
            continue
        row = counts.get(s.user_id)
        if row is None:
            row = counts[s.user_id] = [0, 0, 0, 0, 0]
            totals[s.user_id] = 0
        totals[s.user_id] += 1
        for f in s.labels:
            row[BASIC_FOUNDATIONS.index(f)] += 1
    return {
        uid: UserMoralProfile(
            user_id=uid, tweet_count=totals[uid], label_counts=tuple(counts[uid])
        )
        for uid in sorted(counts)
    }


def assign_labels(
    profiles: Mapping[str, UserMoralProfile]
) -> dict[str, UserMoralProfile]:
    """Keep users with at least two labelled tweets and a strict argmax.

    Ties and single-tweet users are excluded; retained profiles come back
    with their foundation label filled in.
    """
    out: dict[str, UserMoralProfile] = {}
    for uid, prof in profiles.items():
        if prof.tweet_count < 2:
            continue
        top = max(prof.label_counts)
        winners = [i for i, c in enumerate(prof.label_counts) if c == top]
        if len(winners) != 1:
            continue
        out[uid] = replace(prof, label=BASIC_FOUNDATIONS[winners[0]])
    return out
