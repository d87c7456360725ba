"""User profile aggregation and retention rule tests."""

from dataclasses import dataclass

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from moralnet.lexicon import BASIC_FOUNDATIONS, Foundation
from moralnet.profiles import UserMoralProfile, assign_labels, build_profiles

CARE, FAIR, INGROUP, AUTHORITY, PURITY = BASIC_FOUNDATIONS


@dataclass(frozen=True)
class FakeTweet:
    user_id: str
    labels: frozenset


def lt(user_id: str, *labels: Foundation) -> FakeTweet:
    return FakeTweet(user_id=user_id, labels=frozenset(labels))


class TestBuildProfiles:
    def test_counts_per_user(self):
        profs = build_profiles(
            [lt("u1", CARE), lt("u1", CARE), lt("u1", FAIR), lt("u2", PURITY)]
        )
        assert set(profs) == {"u1", "u2"}
        p1 = profs["u1"]
        assert p1.tweet_count == 3
        assert p1.label_counts == (2, 1, 0, 0, 0)
        assert p1.proportions == (2 / 3, 1 / 3, 0.0, 0.0, 0.0)
        assert profs["u2"].label_counts == (0, 0, 0, 0, 1)

    def test_multilabel_each_counts_every_label(self):
        profs = build_profiles([lt("u1", CARE, FAIR)])
        p = profs["u1"]
        assert p.tweet_count == 1
        assert p.label_counts == (1, 1, 0, 0, 0)
        # counts can sum past the tweet count, proportions past 1
        assert sum(p.proportions) == 2.0

    def test_multilabel_drop_excludes_ties(self):
        tweets = [lt("u1", CARE, FAIR), lt("u1", CARE)]
        profs = build_profiles(tweets, multilabel="drop")
        assert profs["u1"].tweet_count == 1
        assert profs["u1"].label_counts == (1, 0, 0, 0, 0)

    def test_drop_can_remove_user_entirely(self):
        profs = build_profiles([lt("u1", CARE, FAIR)], multilabel="drop")
        assert profs == {}

    def test_unknown_mode(self):
        with pytest.raises(ValueError):
            build_profiles([], multilabel="first")

    def test_order_independent(self):
        tweets = [lt("u2", FAIR), lt("u1", CARE), lt("u1", PURITY)]
        a = build_profiles(tweets)
        b = build_profiles(list(reversed(tweets)))
        assert a == b
        assert list(a) == ["u1", "u2"]


class TestAssignLabels:
    def test_requires_two_tweets_and_strict_argmax(self):
        profs = build_profiles(
            [
                lt("u_single", CARE),
                lt("u_tied", CARE),
                lt("u_tied", FAIR),
                lt("u_ok", CARE),
                lt("u_ok", CARE),
                lt("u_ok", FAIR),
            ]
        )
        labelled = assign_labels(profs)
        assert set(labelled) == {"u_ok"}
        assert labelled["u_ok"].label is CARE

    def test_input_profiles_untouched(self):
        profs = build_profiles([lt("u1", CARE), lt("u1", CARE)])
        assign_labels(profs)
        assert profs["u1"].label is None

    def test_multilabel_tweets_can_tie_users_out(self):
        # two tweets, both double-labelled: counts tie 2-2
        profs = build_profiles([lt("u1", CARE, FAIR), lt("u1", CARE, FAIR)])
        assert assign_labels(profs) == {}

    def test_zero_count_profile_proportions(self):
        p = UserMoralProfile(user_id="u", tweet_count=0, label_counts=(0,) * 5)
        assert p.proportions == (0.0,) * 5


@given(
    st.lists(
        st.tuples(
            st.sampled_from(["u1", "u2", "u3"]),
            st.sets(st.sampled_from(list(BASIC_FOUNDATIONS)), min_size=1, max_size=3),
        ),
        max_size=20,
    )
)
@settings(max_examples=200, deadline=None)
def test_retention_rule_property(rows):
    tweets = [lt(u, *labels) for u, labels in rows]
    profs = build_profiles(tweets)
    labelled = assign_labels(profs)
    for uid, prof in profs.items():
        top = max(prof.label_counts)
        winners = [i for i, c in enumerate(prof.label_counts) if c == top]
        should_keep = prof.tweet_count >= 2 and len(winners) == 1
        assert (uid in labelled) == should_keep
        if should_keep:
            assert labelled[uid].label is BASIC_FOUNDATIONS[winners[0]]
            assert labelled[uid].label_counts == prof.label_counts
    assert set(labelled) <= set(profs)
