import pytest

from moralnet.lexicon import (
    Foundation,
    MatchMode,
    MoralLexicon,
    MoralTerm,
    Polarity,
)

VIRTUE = Polarity.VIRTUE
VICE = Polarity.VICE


def make_lexicon(
    entries: dict[str, tuple],
    match_mode: MatchMode = MatchMode.TOKEN_PREFIX,
    language_tag: str = "en",
) -> MoralLexicon:
    """Build a lexicon from {'word' or 'stem*': (category, ...)} pairs."""
    terms = []
    for raw, cats in entries.items():
        is_stem = raw.endswith("*")
        terms.append(
            MoralTerm(
                surface=raw[:-1] if is_stem else raw,
                is_stem=is_stem,
                categories=frozenset(cats),
            )
        )
    return MoralLexicon(
        terms=tuple(terms), match_mode=match_mode, language_tag=language_tag
    )


@pytest.fixture
def small_lexicon() -> MoralLexicon:
    return make_lexicon(
        {
            "kill": ((Foundation.CARE, VICE),),
            "killer*": ((Foundation.CARE, VICE),),
            "care": ((Foundation.CARE, VIRTUE),),
            "fair": ((Foundation.FAIRNESS, VIRTUE),),
            "loyal*": ((Foundation.INGROUP, VIRTUE),),
            "obey": ((Foundation.AUTHORITY, VIRTUE),),
            "pure*": ((Foundation.PURITY, VIRTUE),),
            "war": ((Foundation.CARE, VICE), (Foundation.INGROUP, VICE)),
            "moral*": ((Foundation.GENERAL_MORALITY, VIRTUE),),
        }
    )
