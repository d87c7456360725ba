"""Moral foundation dictionaries: parsing, compilation and term matching.

Two file grammars are supported:

* ``liwc``: a ``%``-fenced header mapping integer category ids to names,
  followed by ``word<TAB>id [id...]`` lines. A trailing ``*`` on a word
  marks a stem that matches any continuation of the token.
* ``twocolumn``: ``word<TAB>categoryName`` lines, one category per line;
  repeated words merge their categories.

Compiled lexicons are immutable. Matching is backed by a character trie,
so looking up a token costs O(len(token)) regardless of dictionary size.
"""

from __future__ import annotations

import enum
import json
import unicodedata
import warnings
from dataclasses import dataclass, field

from .errors import DictionaryError


class Foundation(enum.Enum):
    """The moral dimensions a dictionary entry can belong to.

    The first five are the basic foundations used for loading vectors,
    in that fixed order. GENERAL_MORALITY entries are recognized but
    never contribute to loading scores.
    """

    CARE = "care"
    FAIRNESS = "fairness"
    INGROUP = "ingroup"
    AUTHORITY = "authority"
    PURITY = "purity"
    GENERAL_MORALITY = "general"


BASIC_FOUNDATIONS: tuple[Foundation, ...] = (
    Foundation.CARE,
    Foundation.FAIRNESS,
    Foundation.INGROUP,
    Foundation.AUTHORITY,
    Foundation.PURITY,
)


class Polarity(enum.Enum):
    VIRTUE = "virtue"
    VICE = "vice"


class MatchMode(enum.Enum):
    # whole-token equality or stem-prefix matching, for tokenized text
    TOKEN_PREFIX = "token_prefix"
    # greedy longest-match scanning, for unsegmented text
    SUBSTRING_LONGEST = "substring_longest"


Category = tuple[Foundation, Polarity]


def _normalize_category_name(name: str) -> str:
    return "".join(ch for ch in name.casefold() if ch.isalnum())


# Built-in header-name table. Keys are normalized (casefolded, alphanumeric
# only) so "HarmVirtue", "harm.virtue" and "HARM_VIRTUE" all resolve.
# General-morality entries carry an inert VIRTUE polarity; they are kept out
# of every loading computation, so the polarity never matters.
_BUILTIN_CATEGORY_NAMES: dict[str, Category] = {}


def _register(names: tuple[str, ...], cat: Category) -> None:
    for n in names:
        _BUILTIN_CATEGORY_NAMES[_normalize_category_name(n)] = cat


_register(("HarmVirtue", "CareVirtue"), (Foundation.CARE, Polarity.VIRTUE))
_register(("HarmVice", "CareVice"), (Foundation.CARE, Polarity.VICE))
_register(("FairnessVirtue",), (Foundation.FAIRNESS, Polarity.VIRTUE))
_register(("FairnessVice", "CheatingVice"), (Foundation.FAIRNESS, Polarity.VICE))
_register(("IngroupVirtue", "LoyaltyVirtue"), (Foundation.INGROUP, Polarity.VIRTUE))
_register(("IngroupVice", "LoyaltyVice", "BetrayalVice"), (Foundation.INGROUP, Polarity.VICE))
_register(("AuthorityVirtue",), (Foundation.AUTHORITY, Polarity.VIRTUE))
_register(("AuthorityVice", "SubversionVice"), (Foundation.AUTHORITY, Polarity.VICE))
_register(("PurityVirtue", "SanctityVirtue"), (Foundation.PURITY, Polarity.VIRTUE))
_register(("PurityVice", "SanctityVice", "DegradationVice"), (Foundation.PURITY, Polarity.VICE))
_register(
    ("MoralityGeneral", "GeneralMorality"),
    (Foundation.GENERAL_MORALITY, Polarity.VIRTUE),
)

# Canonical names used when writing dictionaries back out.
CANONICAL_CATEGORY_NAMES: dict[Category, str] = {
    (Foundation.CARE, Polarity.VIRTUE): "HarmVirtue",
    (Foundation.CARE, Polarity.VICE): "HarmVice",
    (Foundation.FAIRNESS, Polarity.VIRTUE): "FairnessVirtue",
    (Foundation.FAIRNESS, Polarity.VICE): "FairnessVice",
    (Foundation.INGROUP, Polarity.VIRTUE): "IngroupVirtue",
    (Foundation.INGROUP, Polarity.VICE): "IngroupVice",
    (Foundation.AUTHORITY, Polarity.VIRTUE): "AuthorityVirtue",
    (Foundation.AUTHORITY, Polarity.VICE): "AuthorityVice",
    (Foundation.PURITY, Polarity.VIRTUE): "PurityVirtue",
    (Foundation.PURITY, Polarity.VICE): "PurityVice",
    (Foundation.GENERAL_MORALITY, Polarity.VIRTUE): "MoralityGeneral",
}

_CATEGORY_ORDER: dict[Category, int] = {
    cat: i for i, cat in enumerate(CANONICAL_CATEGORY_NAMES)
}


class DictionaryWarning(UserWarning):
    """Non-fatal dictionary issue, e.g. a term line referencing an unknown id."""


@dataclass(frozen=True)
class MoralTerm:
    """One compiled dictionary entry.

    ``surface`` never carries the trailing ``*``; ``is_stem`` records
    whether the source entry had one. ``categories`` is a non-empty set of
    (Foundation, Polarity) pairs; multi-category entries are allowed.
    """

    surface: str
    is_stem: bool
    categories: frozenset[Category]

    def __post_init__(self):
        if not self.surface:
            raise DictionaryError("term surface must be non-empty")
        if self.surface.endswith("*"):
            raise DictionaryError(f"term surface {self.surface!r} retains a trailing '*'")
        if not self.categories:
            raise DictionaryError(f"term {self.surface!r} has no categories")

    @property
    def basic_foundations(self) -> frozenset[Foundation]:
        """Foundations of this term excluding general morality."""
        return frozenset(
            f for f, _ in self.categories if f is not Foundation.GENERAL_MORALITY
        )

    def sort_key(self) -> tuple[str, bool]:
        return (self.surface, self.is_stem)


class _TrieNode:
    __slots__ = ("children", "term", "stem_term")

    def __init__(self):
        self.children: dict[str, _TrieNode] = {}
        self.term: MoralTerm | None = None
        self.stem_term: MoralTerm | None = None


def _build_trie(terms: tuple[MoralTerm, ...]) -> _TrieNode:
    root = _TrieNode()
    for term in terms:
        node = root
        for ch in term.surface:
            nxt = node.children.get(ch)
            if nxt is None:
                nxt = _TrieNode()
                node.children[ch] = nxt
            node = nxt
        if term.is_stem:
            node.stem_term = term
        else:
            node.term = term
    return root


@dataclass(frozen=True)
class MoralLexicon:
    """Immutable compiled dictionary.

    Safe to share across worker processes; all matching operations are
    pure functions of (lexicon, input).
    """

    terms: tuple[MoralTerm, ...]
    match_mode: MatchMode
    language_tag: str = "en"
    _root: _TrieNode = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        seen: set[tuple[str, bool]] = set()
        for t in self.terms:
            key = (t.surface, t.is_stem)
            if key in seen:
                raise DictionaryError(
                    f"duplicate dictionary entry {t.surface!r} (stem={t.is_stem})"
                )
            seen.add(key)
        object.__setattr__(self, "_root", _build_trie(self.terms))

    def __len__(self) -> int:
        return len(self.terms)


def _clean_surface(raw: str, match_mode: MatchMode) -> tuple[str, bool]:
    is_stem = raw.endswith("*")
    surface = raw[:-1] if is_stem else raw
    surface = unicodedata.normalize("NFKC", surface)
    if match_mode is MatchMode.TOKEN_PREFIX:
        surface = surface.lower()
    return surface, is_stem


def parse_dictionary(
    data: bytes | str,
    fmt: str,
    *,
    match_mode: MatchMode = MatchMode.TOKEN_PREFIX,
    language_tag: str = "en",
    category_names: dict[str, Category] | None = None,
) -> MoralLexicon:
    """Parse a dictionary file into a compiled lexicon.

    ``fmt`` is ``"liwc"`` or ``"twocolumn"``. ``category_names`` overrides
    the built-in header-name table (keys are normalized before lookup).

    Raises DictionaryError on a malformed header, a duplicate entry, an
    unknown category name or an empty dictionary. Term lines referencing
    ids absent from a liwc header are skipped with a DictionaryWarning
    naming the line, never dropped silently.
    """
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise DictionaryError(f"dictionary is not valid UTF-8: {exc}") from None
    else:
        text = data

    table = dict(_BUILTIN_CATEGORY_NAMES)
    if category_names:
        for name, cat in category_names.items():
            table[_normalize_category_name(name)] = cat

    fmt_norm = fmt.strip().lower()
    if fmt_norm == "liwc":
        entries = _parse_liwc(text, table, match_mode)
    elif fmt_norm == "twocolumn":
        entries = _parse_twocolumn(text, table, match_mode)
    else:
        raise DictionaryError(f"unknown dictionary format {fmt!r}")

    if not entries:
        raise DictionaryError("empty dictionary: no valid term entries")

    terms = tuple(
        MoralTerm(surface=s, is_stem=stem, categories=frozenset(cats))
        for (s, stem), cats in entries.items()
    )
    return MoralLexicon(terms=terms, match_mode=match_mode, language_tag=language_tag)


def _parse_liwc(
    text: str, table: dict[str, Category], match_mode: MatchMode
) -> dict[tuple[str, bool], set[Category]]:
    lines = text.splitlines()
    fences = [i for i, ln in enumerate(lines) if ln.strip() == "%"]
    if len(fences) < 2:
        raise DictionaryError(
            "malformed header: expected two '%' fence lines around the category block"
        )
    header_lines = lines[fences[0] + 1 : fences[1]]
    body_lines = lines[fences[1] + 1 :]

    for i in range(fences[0]):
        if lines[i].strip():
            raise DictionaryError(
                f"line {i + 1}: unexpected content before the first '%' fence"
            )

    id_to_cat: dict[int, Category] = {}
    for off, ln in enumerate(header_lines):
        if not ln.strip():
            continue
        lineno = fences[0] + 2 + off
        parts = ln.split()
        if len(parts) != 2:
            raise DictionaryError(f"line {lineno}: header line must be 'id name'")
        raw_id, name = parts
        try:
            cat_id = int(raw_id)
        except ValueError:
            raise DictionaryError(f"line {lineno}: category id {raw_id!r} is not an integer") from None
        cat = table.get(_normalize_category_name(name))
        if cat is None:
            raise DictionaryError(f"line {lineno}: unknown category name {name!r}")
        id_to_cat[cat_id] = cat

    entries: dict[tuple[str, bool], set[Category]] = {}
    for off, ln in enumerate(body_lines):
        if not ln.strip():
            continue
        lineno = fences[1] + 2 + off
        parts = ln.split()
        if len(parts) < 2:
            raise DictionaryError(f"line {lineno}: term line must be 'word id [id...]'")
        surface, is_stem = _clean_surface(parts[0], match_mode)
        cats: set[Category] = set()
        unknown: list[str] = []
        for raw_id in parts[1:]:
            try:
                cat_id = int(raw_id)
            except ValueError:
                raise DictionaryError(f"line {lineno}: category id {raw_id!r} is not an integer") from None
            cat = id_to_cat.get(cat_id)
            if cat is None:
                unknown.append(raw_id)
            else:
                cats.add(cat)
        if unknown:
            warnings.warn(
                f"line {lineno}: term {parts[0]!r} references unknown category "
                f"id(s) {', '.join(unknown)}" + ("" if cats else "; entry skipped"),
                DictionaryWarning,
                stacklevel=3,
            )
        if not cats:
            continue
        key = (surface, is_stem)
        if key in entries:
            raise DictionaryError(f"line {lineno}: duplicate entry for {parts[0]!r}")
        entries[key] = cats
    return entries


def _parse_twocolumn(
    text: str, table: dict[str, Category], match_mode: MatchMode
) -> dict[tuple[str, bool], set[Category]]:
    entries: dict[tuple[str, bool], set[Category]] = {}
    for i, ln in enumerate(text.splitlines()):
        if not ln.strip():
            continue
        lineno = i + 1
        parts = ln.split("\t")
        if len(parts) != 2 or not parts[0].strip() or not parts[1].strip():
            raise DictionaryError(f"line {lineno}: expected 'word<TAB>categoryName'")
        raw_word, name = parts[0].strip(), parts[1].strip()
        cat = table.get(_normalize_category_name(name))
        if cat is None:
            raise DictionaryError(f"line {lineno}: unknown category name {name!r}")
        key = _clean_surface(raw_word, match_mode)
        cats = entries.setdefault(key, set())
        if cat in cats:
            raise DictionaryError(f"line {lineno}: duplicate entry for {raw_word!r}")
        cats.add(cat)
    return entries


def serialize_dictionary(lex: MoralLexicon, fmt: str) -> bytes:
    """Write a compiled lexicon back into one of the parseable grammars.

    Parsing the result yields the same term set.
    """
    fmt_norm = fmt.strip().lower()
    terms = sorted(lex.terms, key=MoralTerm.sort_key)
    if fmt_norm == "liwc":
        used = sorted(
            {c for t in terms for c in t.categories}, key=_CATEGORY_ORDER.__getitem__
        )
        ids = {cat: i + 1 for i, cat in enumerate(used)}
        out = ["%"]
        out.extend(f"{ids[cat]:02d}\t{CANONICAL_CATEGORY_NAMES[cat]}" for cat in used)
        out.append("%")
        for t in terms:
            id_list = sorted(ids[c] for c in t.categories)
            word = t.surface + ("*" if t.is_stem else "")
            out.append(word + "\t" + " ".join(f"{i:02d}" for i in id_list))
    elif fmt_norm == "twocolumn":
        out = []
        for t in terms:
            word = t.surface + ("*" if t.is_stem else "")
            for cat in sorted(t.categories, key=_CATEGORY_ORDER.__getitem__):
                out.append(word + "\t" + CANONICAL_CATEGORY_NAMES[cat])
    else:
        raise DictionaryError(f"unknown dictionary format {fmt!r}")
    return ("\n".join(out) + "\n").encode("utf-8")


def lexicon_to_json(lex: MoralLexicon) -> str:
    """JSON round-trip form of a compiled lexicon."""
    payload = {
        "language_tag": lex.language_tag,
        "match_mode": lex.match_mode.value,
        "terms": [
            {
                "surface": t.surface,
                "stem": t.is_stem,
                "categories": sorted(
                    [f.value, p.value] for f, p in t.categories
                ),
            }
            for t in sorted(lex.terms, key=MoralTerm.sort_key)
        ],
    }
    return json.dumps(payload, ensure_ascii=False, sort_keys=True)


def lexicon_from_json(text: str) -> MoralLexicon:
    payload = json.loads(text)
    terms = tuple(
        MoralTerm(
            surface=t["surface"],
            is_stem=bool(t["stem"]),
            categories=frozenset(
                (Foundation(f), Polarity(p)) for f, p in t["categories"]
            ),
        )
        for t in payload["terms"]
    )
    return MoralLexicon(
        terms=terms,
        match_mode=MatchMode(payload["match_mode"]),
        language_tag=payload["language_tag"],
    )


def match_tokens(
    lex: MoralLexicon, tokens: list[str] | tuple[str, ...]
) -> list[tuple[int, MoralTerm]]:
    """Match lowercased tokens against a token-prefix lexicon.

    A token matches an exact term when equal to its surface, and a stem
    when the stem surface is a prefix of the token. At most one term is
    returned per token: the one with the longest surface, exact entries
    winning length ties.
    """
    if lex.match_mode is not MatchMode.TOKEN_PREFIX:
        raise ValueError("match_tokens requires a TOKEN_PREFIX lexicon")
    root = lex._root
    out: list[tuple[int, MoralTerm]] = []
    for idx, tok in enumerate(tokens):
        node = root
        best: MoralTerm | None = None
        walked_all = True
        for ch in tok:
            node = node.children.get(ch)
            if node is None:
                walked_all = False
                break
            if node.stem_term is not None:
                best = node.stem_term  # deeper hits overwrite: longest stem wins
        if walked_all and node.term is not None:
            best = node.term  # full-length exact match beats any stem
        if best is not None:
            out.append((idx, best))
    return out


def match_substring(lex: MoralLexicon, text: str) -> list[tuple[int, MoralTerm]]:
    """Greedy longest-match scan over unsegmented text.

    At each position the longest term starting there is reported and the
    scan advances past it, so matches never overlap. Offsets are byte
    offsets into the UTF-8 encoding of ``text``. Stems have no special
    continuation semantics here; their surface is matched literally.
    """
    if lex.match_mode is not MatchMode.SUBSTRING_LONGEST:
        raise ValueError("match_substring requires a SUBSTRING_LONGEST lexicon")
    root = lex._root
    out: list[tuple[int, MoralTerm]] = []
    byte_pos = 0
    i = 0
    n = len(text)
    while i < n:
        node = root
        best_len = 0
        best_term: MoralTerm | None = None
        j = i
        while j < n:
            node = node.children.get(text[j])
            if node is None:
                break
            j += 1
            hit = node.term if node.term is not None else node.stem_term
            if hit is not None:
                best_len = j - i
                best_term = hit
        if best_term is not None:
            segment = text[i : i + best_len]
            out.append((byte_pos, best_term))
            byte_pos += len(segment.encode("utf-8"))
            i += best_len
        else:
            byte_pos += len(text[i].encode("utf-8"))
            i += 1
    return out


# ------------------------------------------------------------- loaders

_FMT_BY_SUFFIX = {".dic": "liwc", ".tsv": "twocolumn"}

_BUNDLED_DICTIONARIES = {
    "en": ("mfd_en.dic", "liwc", MatchMode.TOKEN_PREFIX),
    "ja": ("mfd_ja.dic", "liwc", MatchMode.SUBSTRING_LONGEST),
}


def load_dictionary(
    path: str,
    fmt: str | None = None,
    *,
    match_mode: MatchMode = MatchMode.TOKEN_PREFIX,
    language_tag: str = "en",
) -> MoralLexicon:
    """Load a dictionary file, inferring the format from the suffix when
    ``fmt`` is not given."""
    from pathlib import Path

    p = Path(path)
    if fmt is None:
        fmt = _FMT_BY_SUFFIX.get(p.suffix.lower())
        if fmt is None:
            raise DictionaryError(
                f"cannot infer dictionary format from {p.name!r}; "
                "pass fmt='liwc' or fmt='twocolumn'"
            )
    return parse_dictionary(
        p.read_bytes(), fmt, match_mode=match_mode, language_tag=language_tag
    )


def default_lexicon(lang: str) -> MoralLexicon:
    """The dictionary bundled with the package for one language."""
    from importlib import resources

    entry = _BUNDLED_DICTIONARIES.get(lang)
    if entry is None:
        raise ValueError(f"no bundled dictionary for language {lang!r}")
    name, fmt, mode = entry
    data = resources.files("moralnet.data").joinpath(name).read_bytes()
    return parse_dictionary(data, fmt, match_mode=mode, language_tag=lang)
