"""Rule-based emotional valence scoring, one scorer per language.

The English scorer sums signed word intensities from a lexicon, applies
negation and booster rules over a short preceding-token window, and
squashes the sum into [-1, +1]. The Japanese scorer counts positive and
negative polar terms per sentence with a trailing-negation flip and
averages the per-sentence ratios. Both label by the sign of the score.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import DataError

# negation multiplier, look-back window and normalization constant for the
# English rule set; overridable per call
NEGATION_SCALAR = -0.74
NEGATION_WINDOW = 3
NORMALIZATION_ALPHA = 15.0

NEGATORS = frozenset(
    [
        "not", "no", "never", "none", "nobody", "nothing", "nowhere",
        "neither", "nor", "cannot", "cant", "wont", "without", "hardly",
        "scarcely", "barely", "aint", "isnt", "arent", "wasnt", "werent",
        "dont", "doesnt", "didnt", "couldnt", "shouldnt", "wouldnt",
    ]
)

_SENTENCE_SPLIT_RE = re.compile(r"[。！？!?]")
_JA_NEGATION_SUFFIXES = ("ない", "ぬ")

POSITIVE = "positive"
NEGATIVE = "negative"
NEUTRAL = "neutral"


@dataclass(frozen=True)
class ValenceLexiconEntry:
    """Either a polar word (signed intensity) or a booster (delta), never both."""

    surface: str
    polarity: float = 0.0
    is_booster: bool = False
    booster_delta: float = 0.0

    def __post_init__(self):
        if not self.surface:
            raise DataError("valence entry surface must be non-empty")
        if self.is_booster and self.polarity != 0.0:
            raise DataError(f"entry {self.surface!r} mixes polar and booster roles")
        if not self.is_booster and self.booster_delta != 0.0:
            raise DataError(f"entry {self.surface!r} mixes polar and booster roles")


class _VNode:
    __slots__ = ("children", "entry")

    def __init__(self):
        self.children: dict[str, _VNode] = {}
        self.entry: ValenceLexiconEntry | None = None


@dataclass(frozen=True)
class ValenceLexicon:
    entries: tuple[ValenceLexiconEntry, ...]
    _by_surface: dict = field(init=False, repr=False, compare=False)
    _root: _VNode = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        by_surface: dict[str, ValenceLexiconEntry] = {}
        root = _VNode()
        for e in self.entries:
            if e.surface in by_surface:
                raise DataError(f"duplicate valence entry {e.surface!r}")
            by_surface[e.surface] = e
            node = root
            for ch in e.surface:
                node = node.children.setdefault(ch, _VNode())
            node.entry = e
        object.__setattr__(self, "_by_surface", by_surface)
        object.__setattr__(self, "_root", root)

    def get(self, surface: str) -> ValenceLexiconEntry | None:
        return self._by_surface.get(surface)

    def __len__(self) -> int:
        return len(self.entries)


def parse_valence_lexicon(text: str) -> ValenceLexicon:
    """TSV grammar: ``surface<TAB>polarity`` or ``surface<TAB>BOOST<TAB>delta``."""
    entries = []
    for lineno, ln in enumerate(text.splitlines(), start=1):
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        parts = ln.split("\t")
        try:
            if len(parts) == 3 and parts[1].strip().upper() == "BOOST":
                entries.append(
                    ValenceLexiconEntry(
                        surface=parts[0].strip(),
                        is_booster=True,
                        booster_delta=float(parts[2]),
                    )
                )
            elif len(parts) == 2:
                entries.append(
                    ValenceLexiconEntry(surface=parts[0].strip(), polarity=float(parts[1]))
                )
            else:
                raise ValueError("expected 2 or 3 tab-separated fields")
        except ValueError as exc:
            raise DataError(f"valence lexicon line {lineno}: {exc}") from None
    if not entries:
        raise DataError("valence lexicon has no entries")
    return ValenceLexicon(entries=tuple(entries))


def load_valence_lexicon(path: str | Path) -> ValenceLexicon:
    return parse_valence_lexicon(Path(path).read_text("utf-8"))


def default_valence_lexicon(lang: str) -> ValenceLexicon:
    name = {"en": "valence_en.tsv", "ja": "valence_ja.tsv"}.get(lang)
    if name is None:
        raise ValueError(f"no bundled valence lexicon for language {lang!r}")
    return parse_valence_lexicon(
        resources.files("moralnet.data").joinpath(name).read_text("utf-8")
    )


@dataclass(frozen=True)
class ValenceResult:
    score: float
    label: str

    @staticmethod
    def from_score(score: float) -> "ValenceResult":
        if score < 0:
            label = NEGATIVE
        elif score > 0:
            label = POSITIVE
        else:
            label = NEUTRAL
        return ValenceResult(score=score, label=label)


def _normalize(s: float, alpha: float) -> float:
    if s == 0.0:
        return 0.0
    norm = s / math.sqrt(s * s + alpha)
    return max(-1.0, min(1.0, norm))


def _is_negator(token: str) -> bool:
    return token in NEGATORS or token.endswith("n't")


def valence_en(
    tokens: list[str] | tuple[str, ...],
    vlex: ValenceLexicon,
    *,
    negation_scalar: float = NEGATION_SCALAR,
    window: int = NEGATION_WINDOW,
    alpha: float = NORMALIZATION_ALPHA,
) -> ValenceResult:
    """Score a token sequence.

    The window walks the preceding tokens nearest first. Each negator in
    it multiplies the current polarity by ``negation_scalar``; each
    booster shifts the polarity away from zero by its delta (toward zero
    for dampeners with a negative delta). Tokens must keep negation words,
    so feed the stopword-free cleaning output, not the moral-scoring one.
    """
    total = 0.0
    for i, tok in enumerate(tokens):
        entry = vlex.get(tok)
        if entry is None or entry.is_booster or entry.polarity == 0.0:
            continue
        polarity = entry.polarity
        for dist in range(1, window + 1):
            j = i - dist
            if j < 0:
                break
            prev = tokens[j]
            if _is_negator(prev):
                polarity *= negation_scalar
                continue
            prev_entry = vlex.get(prev)
            if prev_entry is not None and prev_entry.is_booster and polarity != 0.0:
                delta = prev_entry.booster_delta
                polarity += delta if polarity > 0 else -delta
        total += polarity
    return ValenceResult.from_score(_normalize(total, alpha))


def _scan_sentence_ja(sentence: str, vlex: ValenceLexicon) -> tuple[int, int]:
    """Longest-match polar hits in one sentence; returns (n_pos, n_neg).

    A negation suffix directly after a matched term flips its sign and is
    consumed with it.
    """
    root = vlex._root
    n_pos = n_neg = 0
    i = 0
    n = len(sentence)
    while i < n:
        node = root
        best_len = 0
        best_entry: ValenceLexiconEntry | None = None
        j = i
        while j < n:
            node = node.children.get(sentence[j])
            if node is None:
                break
            j += 1
            if node.entry is not None:
                best_len = j - i
                best_entry = node.entry
        if best_entry is None:
            i += 1
            continue
        i += best_len
        if best_entry.is_booster or best_entry.polarity == 0.0:
            continue
        sign = 1 if best_entry.polarity > 0 else -1
        for suffix in _JA_NEGATION_SUFFIXES:
            if sentence.startswith(suffix, i):
                sign = -sign
                i += len(suffix)
                break
        if sign > 0:
            n_pos += 1
        else:
            n_neg += 1
    return n_pos, n_neg


def valence_ja(text: str, polar_dict: ValenceLexicon) -> ValenceResult:
    """Score cleaned Japanese text that kept its sentence terminators.

    Each sentence scores (n_pos - n_neg) / (n_pos + n_neg), or 0 with no
    hits; the text score is the mean over non-empty sentences.
    """
    sentences = [s.strip() for s in _SENTENCE_SPLIT_RE.split(text) if s.strip()]
    if not sentences:
        return ValenceResult.from_score(0.0)
    scores = []
    for sent in sentences:
        n_pos, n_neg = _scan_sentence_ja(sent, polar_dict)
        hits = n_pos + n_neg
        scores.append((n_pos - n_neg) / hits if hits else 0.0)
    return ValenceResult.from_score(sum(scores) / len(scores))
