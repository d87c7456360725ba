"""Tweet records, JSONL ingestion and text normalization.

English text becomes a token sequence (lowercased, noise stripped,
stopwords removed); Japanese text stays unsegmented and is only cleaned.
Everything here is a pure function, safe for data-parallel use.
"""

from __future__ import annotations

import json
import re
import string
import unicodedata
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Iterator

from .errors import DataError

LANG_EN = "en"
LANG_JA = "ja"
KNOWN_LANGS = (LANG_EN, LANG_JA)

# Ingestion keyword sets emulating collection-time filtering. The single
# English entry covers its derived forms by substring; the Japanese set
# lists the morality word plus its negated/compound variants.
DEFAULT_KEYWORDS: dict[str, tuple[str, ...]] = {
    LANG_EN: ("moral",),
    LANG_JA: ("道徳", "背徳", "非道徳", "反道徳", "不道徳"),
}

_URL_RE = re.compile(r"\b[a-z][a-z0-9+.-]*://\S+", re.IGNORECASE)
_MENTION_RE = re.compile(r"@\w+")
_TOKEN_RE = re.compile(r"[^\W_]+(?:['’][^\W_]+)*")
_WS_RE = re.compile(r"\s+")
# ASCII punctuation; the Japanese cleaning path removes exactly this class
_ASCII_PUNCT = set(string.punctuation)


@dataclass(frozen=True)
class TweetRecord:
    """One input document. ``retweet_of_*`` are both set or both absent."""

    id: str
    user_id: str
    text: str
    lang: str
    timestamp: int = 0
    retweet_of_user_id: str | None = None
    retweet_of_tweet_id: str | None = None

    def __post_init__(self):
        if not self.id or not self.user_id:
            raise DataError("tweet id and user_id must be non-empty")
        if (self.retweet_of_user_id is None) != (self.retweet_of_tweet_id is None):
            raise DataError(
                f"tweet {self.id}: retweet_of_user_id and retweet_of_tweet_id "
                "must be present together"
            )

    @property
    def is_retweet(self) -> bool:
        return self.retweet_of_user_id is not None


@dataclass(frozen=True)
class CleanText:
    """Preprocessed text: ``tokens`` for English, ``normalized_text`` for Japanese."""

    original_id: str
    tokens: tuple[str, ...] = ()
    normalized_text: str = ""

    @property
    def is_empty(self) -> bool:
        return not self.tokens and not self.normalized_text


def record_from_json(obj: dict, line: int | None = None) -> TweetRecord:
    where = f"line {line}: " if line is not None else ""
    if not isinstance(obj, dict):
        raise DataError(f"{where}expected a JSON object per line")
    try:
        rec = TweetRecord(
            id=str(obj["id"]),
            user_id=str(obj["user_id"]),
            text=str(obj.get("text", "")),
            lang=str(obj.get("lang", "")),
            timestamp=int(obj.get("timestamp", 0) or 0),
            retweet_of_user_id=_opt_str(obj.get("retweet_of_user_id")),
            retweet_of_tweet_id=_opt_str(obj.get("retweet_of_tweet_id")),
        )
    except KeyError as exc:
        raise DataError(f"{where}missing required field {exc.args[0]!r}") from None
    except (TypeError, ValueError) as exc:
        raise DataError(f"{where}{exc}") from None
    except DataError as exc:
        raise DataError(f"{where}{exc}") from None
    return rec


def _opt_str(value) -> str | None:
    if value is None or value == "":
        return None
    return str(value)


def record_to_json(rec: TweetRecord) -> str:
    obj = {
        "id": rec.id,
        "user_id": rec.user_id,
        "text": rec.text,
        "lang": rec.lang,
        "timestamp": rec.timestamp,
    }
    if rec.is_retweet:
        obj["retweet_of_user_id"] = rec.retweet_of_user_id
        obj["retweet_of_tweet_id"] = rec.retweet_of_tweet_id
    return json.dumps(obj, ensure_ascii=False, sort_keys=True)


def read_corpus(path: str | Path) -> Iterator[TweetRecord]:
    """Stream TweetRecords from a JSONL file, one object per line."""
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            raw = raw.strip()
            if not raw:
                continue
            try:
                obj = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise DataError(f"line {lineno}: invalid JSON: {exc.msg}") from None
            yield record_from_json(obj, line=lineno)


def load_stopwords(path: str | Path) -> frozenset[str]:
    """One token per line, UTF-8; blank lines ignored."""
    words = set()
    with open(path, "r", encoding="utf-8") as fh:
        for ln in fh:
            w = ln.strip()
            if w:
                words.add(w.lower())
    return frozenset(words)


def default_stopwords() -> frozenset[str]:
    data = resources.files("moralnet.data").joinpath("stopwords_en.txt").read_text("utf-8")
    return frozenset(w.strip().lower() for w in data.splitlines() if w.strip())


def _strip_noise(text: str) -> str:
    # NFKC first: folds full-width '＠'/'＃'/'！' and friends to ASCII forms
    text = unicodedata.normalize("NFKC", text)
    text = _URL_RE.sub(" ", text)
    text = _MENTION_RE.sub(" ", text)
    text = text.replace("#", " ")
    # drop control and format characters
    text = "".join(
        " " if unicodedata.category(ch) in ("Cc", "Cf") else ch for ch in text
    )
    return text


def clean_tokens_en(text: str) -> tuple[str, ...]:
    """English cleaning without stopword removal: lowercase word tokens."""
    return tuple(_TOKEN_RE.findall(_strip_noise(text).lower()))


def clean_text_ja(text: str, keep: str = "") -> str:
    """Japanese cleaning: noise and ASCII punctuation stripped, text unsegmented.

    Characters listed in ``keep`` survive the punctuation pass (the valence
    scorer keeps sentence terminators this way).
    """
    cleaned = _strip_noise(text)
    kept = set(keep)
    cleaned = "".join(
        " " if (ch in _ASCII_PUNCT and ch not in kept) else ch for ch in cleaned
    )
    return _WS_RE.sub(" ", cleaned).strip()


def preprocess(rec: TweetRecord, stopwords: frozenset[str] | set[str]) -> CleanText:
    """Normalize a record for moral scoring.

    English: lowercase, strip URLs / mentions / '#' / punctuation, split
    on whitespace, drop stopwords (hashtag bodies survive as tokens).
    Japanese: strip the same noise classes and ASCII punctuation, keep the
    text unsegmented. Text reduced to nothing yields an empty CleanText.
    """
    if rec.lang == LANG_JA:
        return CleanText(original_id=rec.id, normalized_text=clean_text_ja(rec.text))
    if rec.lang == LANG_EN:
        tokens = tuple(t for t in clean_tokens_en(rec.text) if t not in stopwords)
        return CleanText(original_id=rec.id, tokens=tokens)
    raise ValueError(f"unsupported language {rec.lang!r}")


def keyword_filter(rec: TweetRecord, keywords: Iterable[str]) -> bool:
    """Case-insensitive substring test of any keyword against the raw text."""
    kws = [k.casefold() for k in keywords]
    if not kws:
        raise ValueError("keyword set must be non-empty")
    hay = rec.text.casefold()
    return any(k in hay for k in kws)
