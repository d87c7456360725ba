"""Valence lexicon parsing and the two language scorers."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from moralnet.errors import DataError
from moralnet.valence import (
    NEGATIVE,
    NEUTRAL,
    POSITIVE,
    ValenceLexicon,
    ValenceLexiconEntry,
    default_valence_lexicon,
    parse_valence_lexicon,
    valence_en,
    valence_ja,
)


def vlex(*entries: ValenceLexiconEntry) -> ValenceLexicon:
    return ValenceLexicon(entries=tuple(entries))


def polar(surface: str, value: float) -> ValenceLexiconEntry:
    return ValenceLexiconEntry(surface=surface, polarity=value)


def boost(surface: str, delta: float) -> ValenceLexiconEntry:
    return ValenceLexiconEntry(surface=surface, is_booster=True, booster_delta=delta)


class TestLexicon:
    def test_entry_roles_are_exclusive(self):
        with pytest.raises(DataError):
            ValenceLexiconEntry(
                surface="x", polarity=1.0, is_booster=True, booster_delta=0.1
            )
        with pytest.raises(DataError):
            ValenceLexiconEntry(surface="x", polarity=0.0, booster_delta=0.1)
        with pytest.raises(DataError):
            ValenceLexiconEntry(surface="", polarity=1.0)

    def test_duplicate_surfaces_rejected(self):
        with pytest.raises(DataError):
            vlex(polar("x", 1.0), polar("x", -1.0))

    def test_parse_grammar(self):
        lex = parse_valence_lexicon(
            "# comment\n\ngood\t1.9\nvery\tBOOST\t0.293\nbad\t-2.5\n"
        )
        assert len(lex) == 3
        assert lex.get("good").polarity == 1.9
        assert lex.get("very").is_booster
        assert lex.get("very").booster_delta == 0.293
        assert lex.get("missing") is None

    def test_parse_errors_name_lines(self):
        with pytest.raises(DataError, match="line 2"):
            parse_valence_lexicon("good\t1.9\nbad\tnot_a_number\n")
        with pytest.raises(DataError, match="line 1"):
            parse_valence_lexicon("toomany\t1\t2\t3\n")
        with pytest.raises(DataError):
            parse_valence_lexicon("# only comments\n")

    def test_bundled_lexicons_load(self):
        en = default_valence_lexicon("en")
        ja = default_valence_lexicon("ja")
        assert len(en) > 50
        assert len(ja) > 30
        with pytest.raises(ValueError):
            default_valence_lexicon("de")


class TestEnglishScorer:
    def setup_method(self):
        self.lex = default_valence_lexicon("en")

    def test_single_positive_word(self):
        r = valence_en(("good",), self.lex)
        assert r.label == POSITIVE
        assert r.score == pytest.approx(0.44043357076016854, abs=1e-15)
        assert r.score == pytest.approx(1.9 / math.sqrt(1.9**2 + 15.0), abs=1e-12)

    def test_negation_with_booster(self):
        # nearest rule first: boosted to 2.193, then flipped by -0.74
        r = valence_en(("not", "very", "good"), self.lex)
        assert r.label == NEGATIVE
        assert r.score == pytest.approx(-0.38645643141214686, abs=1e-15)

    def test_contracted_negator(self):
        r = valence_en(("isn't", "good"), self.lex)
        assert r.score == pytest.approx(
            (1.9 * -0.74) / math.sqrt((1.9 * 0.74) ** 2 + 15.0), abs=1e-12
        )

    def test_booster_moves_away_from_zero_for_negatives(self):
        plain = valence_en(("bad",), self.lex)
        boosted = valence_en(("very", "bad"), self.lex)
        assert boosted.score < plain.score < 0

    def test_dampener_moves_toward_zero(self):
        plain = valence_en(("good",), self.lex)
        damped = valence_en(("slightly", "good"), self.lex)
        assert 0 < damped.score < plain.score

    def test_negator_outside_window_ignored(self):
        near = valence_en(("not", "x", "x", "good"), self.lex)
        far = valence_en(("not", "x", "x", "x", "good"), self.lex)
        assert near.label == NEGATIVE
        assert far.score == valence_en(("good",), self.lex).score

    def test_no_polar_tokens_is_neutral(self):
        r = valence_en(("the", "weather", "today"), self.lex)
        assert r.score == 0.0
        assert r.label == NEUTRAL

    def test_boosters_alone_score_nothing(self):
        assert valence_en(("very", "very"), self.lex).score == 0.0

    @given(st.lists(st.sampled_from(["good", "bad", "not", "very", "kill", "x"]), max_size=12))
    @settings(max_examples=150, deadline=None)
    def test_score_bounded(self, tokens):
        r = valence_en(tuple(tokens), self.lex)
        assert -1.0 <= r.score <= 1.0
        expect = NEGATIVE if r.score < 0 else POSITIVE if r.score > 0 else NEUTRAL
        assert r.label == expect


class TestJapaneseScorer:
    def setup_method(self):
        self.lex = default_valence_lexicon("ja")

    def test_mean_over_sentences(self):
        r = valence_ja("今日は楽しい。最悪だ。良くない!", self.lex)
        assert r.score == pytest.approx(-0.3333333333333333, abs=1e-15)
        assert r.label == NEGATIVE

    def test_trailing_negation_flips_and_is_consumed(self):
        assert valence_ja("良くない", self.lex).score == -1.0
        assert valence_ja("良く", self.lex).score == 1.0

    def test_nu_suffix_also_negates(self):
        lex = vlex(polar("行か", 1.0))
        assert valence_ja("行かぬ", lex).score == -1.0

    def test_sentence_without_hits_scores_zero(self):
        r = valence_ja("これは話。良い。", self.lex)
        assert r.score == pytest.approx(0.5)

    def test_empty_text_is_neutral(self):
        r = valence_ja("", self.lex)
        assert r.score == 0.0
        assert r.label == NEUTRAL

    def test_longest_match_wins(self):
        lex = vlex(polar("良", 1.0), polar("良くな", -1.0))
        # the longer surface absorbs the span, so no extra flip applies
        assert valence_ja("良くない", lex).score == -1.0

    def test_ratio_within_sentence(self):
        lex = vlex(polar("好", 1.0), polar("嫌", -1.0))
        r = valence_ja("好き好き嫌い", lex)
        assert r.score == pytest.approx((2 - 1) / 3)

    def test_ascii_terminators_split_after_folding(self):
        # cleaned text keeps '!' and '?'; both act as sentence breaks
        r = valence_ja("良い!最悪?", self.lex)
        assert r.score == pytest.approx(0.0)
        assert r.label == NEUTRAL
