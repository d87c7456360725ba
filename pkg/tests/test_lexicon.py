import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from moralnet.errors import DictionaryError
from moralnet.lexicon import (
    DictionaryWarning,
    Foundation,
    MatchMode,
    MoralLexicon,
    MoralTerm,
    Polarity,
    lexicon_from_json,
    lexicon_to_json,
    match_substring,
    match_tokens,
    parse_dictionary,
    serialize_dictionary,
)

from conftest import make_lexicon

CARE_V = (Foundation.CARE, Polarity.VICE)
CARE_P = (Foundation.CARE, Polarity.VIRTUE)
FAIR_P = (Foundation.FAIRNESS, Polarity.VIRTUE)

LIWC_SAMPLE = """%
01\tHarmVirtue
02\tHarmVice
11\tMoralityGeneral
%
care\t01
kill\t02
killer*\t02
war\t01 02
moral*\t11
"""


class TestLiwcParsing:
    def test_basic_parse(self):
        lex = parse_dictionary(LIWC_SAMPLE, "liwc")
        by_surface = {(t.surface, t.is_stem): t for t in lex.terms}
        assert set(by_surface) == {
            ("care", False),
            ("kill", False),
            ("killer", True),
            ("war", False),
            ("moral", True),
        }
        assert by_surface[("war", False)].categories == frozenset({CARE_P, CARE_V})
        assert by_surface[("moral", True)].categories == frozenset(
            {(Foundation.GENERAL_MORALITY, Polarity.VIRTUE)}
        )

    def test_bytes_input(self):
        lex = parse_dictionary(LIWC_SAMPLE.encode("utf-8"), "liwc")
        assert len(lex) == 5

    def test_missing_fences(self):
        with pytest.raises(DictionaryError, match="fence"):
            parse_dictionary("01 HarmVirtue\ncare 01\n", "liwc")

    def test_content_before_first_fence(self):
        with pytest.raises(DictionaryError, match="before the first"):
            parse_dictionary("junk\n%\n01 HarmVirtue\n%\ncare 01\n", "liwc")

    def test_bad_header_line(self):
        with pytest.raises(DictionaryError, match="id name"):
            parse_dictionary("%\n01 HarmVirtue extra\n%\ncare 01\n", "liwc")

    def test_unknown_header_name_is_fatal(self):
        with pytest.raises(DictionaryError, match="NotACategory"):
            parse_dictionary("%\n01 NotACategory\n%\ncare 01\n", "liwc")

    def test_non_integer_header_id(self):
        with pytest.raises(DictionaryError, match="not an integer"):
            parse_dictionary("%\nxx HarmVirtue\n%\ncare xx\n", "liwc")

    def test_unknown_term_id_warns_and_keeps_known(self):
        text = "%\n01 HarmVirtue\n%\ncare 01 99\n"
        with pytest.warns(DictionaryWarning, match="99"):
            lex = parse_dictionary(text, "liwc")
        assert len(lex) == 1
        assert lex.terms[0].categories == frozenset({CARE_P})

    def test_unknown_term_id_only_skips_entry(self):
        text = "%\n01 HarmVirtue\n%\ncare 01\nodd 99\n"
        with pytest.warns(DictionaryWarning, match="skipped"):
            lex = parse_dictionary(text, "liwc")
        assert {t.surface for t in lex.terms} == {"care"}

    def test_duplicate_term_line(self):
        text = "%\n01 HarmVirtue\n%\ncare 01\ncare 01\n"
        with pytest.raises(DictionaryError, match="duplicate"):
            parse_dictionary(text, "liwc")

    def test_exact_and_stem_same_surface_are_distinct(self):
        text = "%\n01 HarmVirtue\n%\ncare 01\ncare* 01\n"
        lex = parse_dictionary(text, "liwc")
        assert len(lex) == 2

    def test_empty_dictionary(self):
        with pytest.raises(DictionaryError, match="empty"):
            parse_dictionary("%\n01 HarmVirtue\n%\n", "liwc")

    def test_header_name_aliases(self):
        text = "%\n01 CARE_VIRTUE\n02 sanctity.vice\n%\nhug 01\nrot 02\n"
        lex = parse_dictionary(text, "liwc")
        cats = {t.surface: t.categories for t in lex.terms}
        assert cats["hug"] == frozenset({CARE_P})
        assert cats["rot"] == frozenset({(Foundation.PURITY, Polarity.VICE)})

    def test_surfaces_lowercased_in_token_mode(self):
        text = "%\n01 HarmVirtue\n%\nCaRe 01\n"
        lex = parse_dictionary(text, "liwc")
        assert lex.terms[0].surface == "care"

    def test_nfkc_applied_to_surfaces(self):
        text = "%\n01 HarmVirtue\n%\nａｂ 01\n"  # fullwidth 'ab'
        lex = parse_dictionary(text, "liwc")
        assert lex.terms[0].surface == "ab"

    def test_invalid_utf8(self):
        with pytest.raises(DictionaryError, match="UTF-8"):
            parse_dictionary(b"%\n01 HarmVirtue\n%\ncare 01\n\xff\xfe", "liwc")

    def test_unknown_format(self):
        with pytest.raises(DictionaryError, match="format"):
            parse_dictionary(LIWC_SAMPLE, "weird")


class TestTwoColumnParsing:
    def test_basic(self):
        text = "care\tHarmVirtue\nkill\tHarmVice\n"
        lex = parse_dictionary(text, "twocolumn")
        assert {t.surface for t in lex.terms} == {"care", "kill"}

    def test_multi_category_merge(self):
        text = "war\tHarmVice\nwar\tIngroupVice\n"
        lex = parse_dictionary(text, "twocolumn")
        assert lex.terms[0].categories == frozenset(
            {CARE_V, (Foundation.INGROUP, Polarity.VICE)}
        )

    def test_exact_repeat_is_error(self):
        text = "war\tHarmVice\nwar\tHarmVice\n"
        with pytest.raises(DictionaryError, match="duplicate"):
            parse_dictionary(text, "twocolumn")

    def test_unknown_category_fatal(self):
        with pytest.raises(DictionaryError, match="Nope"):
            parse_dictionary("war\tNope\n", "twocolumn")

    def test_malformed_line(self):
        with pytest.raises(DictionaryError, match="line 1"):
            parse_dictionary("war HarmVice\n", "twocolumn")


class TestRoundTrips:
    def test_liwc_round_trip(self):
        lex = parse_dictionary(LIWC_SAMPLE, "liwc")
        data = serialize_dictionary(lex, "liwc")
        again = parse_dictionary(data, "liwc")
        assert sorted(t.sort_key() for t in lex.terms) == sorted(
            t.sort_key() for t in again.terms
        )
        assert {t.sort_key(): t.categories for t in lex.terms} == {
            t.sort_key(): t.categories for t in again.terms
        }

    def test_twocolumn_round_trip(self):
        lex = parse_dictionary(LIWC_SAMPLE, "liwc")
        data = serialize_dictionary(lex, "twocolumn")
        again = parse_dictionary(data, "twocolumn")
        assert {t.sort_key(): t.categories for t in lex.terms} == {
            t.sort_key(): t.categories for t in again.terms
        }

    def test_json_round_trip(self):
        lex = parse_dictionary(LIWC_SAMPLE, "liwc")
        text = lexicon_to_json(lex)
        json.loads(text)
        again = lexicon_from_json(text)
        assert {t.sort_key(): t.categories for t in lex.terms} == {
            t.sort_key(): t.categories for t in again.terms
        }
        assert again.match_mode is lex.match_mode
        assert again.language_tag == lex.language_tag


class TestConstruction:
    def test_duplicate_terms_rejected(self):
        term = MoralTerm(surface="care", is_stem=False, categories=frozenset({CARE_P}))
        with pytest.raises(DictionaryError, match="duplicate"):
            MoralLexicon(terms=(term, term), match_mode=MatchMode.TOKEN_PREFIX)

    def test_term_validation(self):
        with pytest.raises(DictionaryError):
            MoralTerm(surface="", is_stem=False, categories=frozenset({CARE_P}))
        with pytest.raises(DictionaryError):
            MoralTerm(surface="x*", is_stem=True, categories=frozenset({CARE_P}))
        with pytest.raises(DictionaryError):
            MoralTerm(surface="x", is_stem=False, categories=frozenset())

    def test_basic_foundations_property(self):
        t = MoralTerm(
            surface="x",
            is_stem=False,
            categories=frozenset(
                {CARE_P, (Foundation.GENERAL_MORALITY, Polarity.VIRTUE)}
            ),
        )
        assert t.basic_foundations == frozenset({Foundation.CARE})


class TestTokenMatching:
    def test_exact_match(self, small_lexicon):
        hits = match_tokens(small_lexicon, ["kill"])
        assert [(i, t.surface) for i, t in hits] == [(0, "kill")]

    def test_stem_match(self, small_lexicon):
        hits = match_tokens(small_lexicon, ["killers", "loyalty"])
        assert [(i, t.surface, t.is_stem) for i, t in hits] == [
            (0, "killer", True),
            (1, "loyal", True),
        ]

    def test_exact_does_not_prefix(self, small_lexicon):
        # 'obey' is exact-only, so 'obeyed' must not match
        assert match_tokens(small_lexicon, ["obeyed"]) == []

    def test_no_match(self, small_lexicon):
        assert match_tokens(small_lexicon, ["banana"]) == []

    def test_longest_stem_wins(self):
        lex = make_lexicon({"s*": (CARE_P,), "sin*": (FAIR_P,)})
        hits = match_tokens(lex, ["sinful"])
        assert hits[0][1].surface == "sin"

    def test_exact_beats_stem_on_tie(self):
        lex = make_lexicon({"care": (CARE_P,), "care*": (FAIR_P,)})
        hits = match_tokens(lex, ["care"])
        assert hits[0][1].is_stem is False
        hits = match_tokens(lex, ["careful"])
        assert hits[0][1].is_stem is True

    def test_one_match_per_token(self, small_lexicon):
        hits = match_tokens(small_lexicon, ["kill", "kill"])
        assert [i for i, _ in hits] == [0, 1]

    def test_wrong_mode_rejected(self):
        lex = make_lexicon({"x": (CARE_P,)}, match_mode=MatchMode.SUBSTRING_LONGEST)
        with pytest.raises(ValueError, match="TOKEN_PREFIX"):
            match_tokens(lex, ["x"])


class TestSubstringMatching:
    def make(self, entries):
        return make_lexicon(
            entries, match_mode=MatchMode.SUBSTRING_LONGEST, language_tag="ja"
        )

    def test_basic_hit_with_byte_offset(self):
        lex = self.make({"道徳": (CARE_P,)})
        hits = match_substring(lex, "これは道徳です")
        assert len(hits) == 1
        offset, term = hits[0]
        assert term.surface == "道徳"
        assert offset == len("これは".encode("utf-8"))

    def test_longest_match_wins(self):
        lex = self.make({"公平": (FAIR_P,), "不公平": (CARE_V,)})
        hits = match_substring(lex, "不公平だ")
        assert [t.surface for _, t in hits] == ["不公平"]

    def test_non_overlapping(self):
        lex = self.make({"ああ": (CARE_P,)})
        hits = match_substring(lex, "ああああ")
        assert [o for o, _ in hits] == [0, 6]

    def test_repeated_terms_all_found(self):
        lex = self.make({"悪": (CARE_V,)})
        hits = match_substring(lex, "悪と悪")
        assert len(hits) == 2

    def test_no_match(self):
        lex = self.make({"道徳": (CARE_P,)})
        assert match_substring(lex, "こんにちは") == []


def _naive_token_oracle(lex, tokens):
    """Brute-force per-token matcher used as an independent check."""
    out = []
    for idx, tok in enumerate(tokens):
        candidates = []
        for t in lex.terms:
            if t.is_stem:
                if tok.startswith(t.surface):
                    candidates.append(t)
            elif tok == t.surface:
                candidates.append(t)
        if candidates:
            best = max(candidates, key=lambda t: (len(t.surface), not t.is_stem))
            out.append((idx, best))
    return out


@st.composite
def lexicon_and_tokens(draw):
    alphabet = "abc"
    words = draw(
        st.lists(
            st.text(alphabet, min_size=1, max_size=4),
            min_size=1,
            max_size=8,
            unique=True,
        )
    )
    entries = {}
    for w in words:
        if draw(st.booleans()):
            w = w + "*"
        entries[w] = (CARE_P,)
    tokens = draw(st.lists(st.text(alphabet, min_size=1, max_size=6), max_size=10))
    return make_lexicon(entries), tokens


@given(lexicon_and_tokens())
@settings(max_examples=200, deadline=None)
def test_token_matching_equals_naive_scan(case):
    lex, tokens = case
    got = match_tokens(lex, tokens)
    want = _naive_token_oracle(lex, tokens)
    assert [(i, t.sort_key()) for i, t in got] == [
        (i, t.sort_key()) for i, t in want
    ]
