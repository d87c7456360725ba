"""Batch pipeline: corpus files in, analysis tables out.

Stages communicate only through files inside one output directory, so
every stage can also run on its own from the command line. Outputs are
deterministic byte for byte: fixed sort orders, repr-formatted floats,
sorted JSON keys, and a manifest of SHA-256 hashes at the end.
"""

from __future__ import annotations

import math
import multiprocessing
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Sequence

from . import _io, stats as statsmod
from .errors import ConfigError, DataError, MoralnetError, PipelineStageError
from .graph import (
    EDGE_HEADER,
    build_network,
    edge_rows,
    k_core,
    network_from_edge_rows,
    network_homophily,
    to_gexf,
)
from .lexicon import (
    BASIC_FOUNDATIONS,
    Foundation,
    MatchMode,
    MoralLexicon,
    default_lexicon,
    load_dictionary,
)
from .profiles import MULTILABEL_MODES, assign_labels, build_profiles
from .scoring import (
    COUNTING_MODES,
    FilterStats,
    MoralScoredTweet,
    ScoredRow,
    score_corpus,
    scored_row_from_json,
    scored_to_json,
)
from .textprep import (
    DEFAULT_KEYWORDS,
    KNOWN_LANGS,
    LANG_EN,
    LANG_JA,
    TweetRecord,
    clean_tokens_en,
    clean_text_ja,
    default_stopwords,
    keyword_filter,
    load_stopwords,
    read_corpus,
    record_to_json,
)
from .valence import (
    ValenceLexicon,
    ValenceResult,
    default_valence_lexicon,
    load_valence_lexicon,
    valence_en,
    valence_ja,
)

FILTERED_NAME = "corpus_filtered.jsonl"
FILTER_STATS_NAME = "filter_stats.json"
SHARES_NAME = "foundation_shares.csv"
VALENCE_SHARES_NAME = "valence_shares.csv"
KW_LOADINGS_NAME = "kw_loadings.csv"
KW_VALENCE_NAME = "kw_valence.csv"
MANIFEST_NAME = "manifest.json"


def scored_name(lang: str) -> str:
    return f"scored_{lang}.jsonl"


def valence_name(lang: str) -> str:
    return f"valence_{lang}.jsonl"


def profiles_name(lang: str) -> str:
    return f"profiles_{lang}.csv"


def edges_name(lang: str) -> str:
    return f"edges_{lang}.csv"


def gexf_name(lang: str) -> str:
    return f"kcore_{lang}.gexf"


def homophily_name(lang: str) -> str:
    return f"homophily_{lang}.csv"


def pca_name(kind: str, lang: str) -> str:
    return f"pca_{kind}_{lang}.csv"


PROFILE_HEADER = (
    ("user_id", "tweet_count")
    + tuple(f.value for f in BASIC_FOUNDATIONS)
    + ("label",)
)
SHARES_HEADER = ("lang", "foundation", "count", "share")
VALENCE_SHARES_HEADER = ("lang", "label", "count", "share")
HOMOPHILY_HEADER = ("foundation", "score", "num_users")
KW_HEADER = (
    "group",
    "h_statistic",
    "degrees_of_freedom",
    "p_value",
    "n_en",
    "n_ja",
    "note",
)


# ---------------------------------------------------------------- config

def _as_bool(key: str, value) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ("true", "1", "yes", "on"):
        return True
    if text in ("false", "0", "no", "off"):
        return False
    raise ConfigError(f"{key}: expected a boolean, got {value!r}")


def _as_int(key: str, value) -> int:
    try:
        return int(str(value).strip())
    except ValueError:
        raise ConfigError(f"{key}: expected an integer, got {value!r}") from None


def _as_tuple(value) -> tuple[str, ...]:
    if isinstance(value, (list, tuple)):
        return tuple(str(v) for v in value)
    return tuple(p.strip() for p in str(value).split(",") if p.strip())


@dataclass(frozen=True)
class PipelineConfig:
    """Everything a pipeline run needs; built from flat key = value files."""

    corpus: tuple[str, ...] = ()
    out_dir: str = "out"
    dictionary_en: str | None = None
    dictionary_ja: str | None = None
    valence_en: str | None = None
    valence_ja: str | None = None
    stopwords: str | None = None
    keywords_en: tuple[str, ...] = DEFAULT_KEYWORDS[LANG_EN]
    keywords_ja: tuple[str, ...] = DEFAULT_KEYWORDS[LANG_JA]
    filter_keywords: bool = True
    counting: str = "multiset"
    multilabel: str = "each"
    k_core: int = 2
    pca_mode: str = "covariance"
    biplot_axes: tuple[int, int] = (1, 2)
    workers: int = 1

    def __post_init__(self) -> None:
        if self.counting not in COUNTING_MODES:
            raise ConfigError(
                f"counting must be one of {COUNTING_MODES}, got {self.counting!r}"
            )
        if self.multilabel not in MULTILABEL_MODES:
            raise ConfigError(
                f"multilabel must be one of {MULTILABEL_MODES}, "
                f"got {self.multilabel!r}"
            )
        if self.pca_mode not in statsmod.PCA_MODES:
            raise ConfigError(
                f"pca_mode must be one of {statsmod.PCA_MODES}, "
                f"got {self.pca_mode!r}"
            )
        if self.k_core < 1:
            raise ConfigError(f"k_core must be >= 1, got {self.k_core}")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")
        axes = self.biplot_axes
        if (
            len(axes) != 2
            or axes[0] == axes[1]
            or not all(1 <= a <= len(BASIC_FOUNDATIONS) for a in axes)
        ):
            raise ConfigError(
                "biplot_axes must be two distinct component numbers in "
                f"1..{len(BASIC_FOUNDATIONS)}, got {axes!r}"
            )
        if self.filter_keywords:
            if not self.keywords_en or not self.keywords_ja:
                raise ConfigError(
                    "keyword filtering is on but a keyword list is empty; "
                    "set filter_keywords = false to disable filtering"
                )

    _KEYS = (
        "corpus",
        "out_dir",
        "dictionary_en",
        "dictionary_ja",
        "valence_en",
        "valence_ja",
        "stopwords",
        "keywords_en",
        "keywords_ja",
        "filter_keywords",
        "counting",
        "multilabel",
        "k_core",
        "pca_mode",
        "biplot_axes",
        "workers",
    )

    @classmethod
    def from_mapping(cls, mapping: dict) -> "PipelineConfig":
        unknown = sorted(set(mapping) - set(cls._KEYS))
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        kwargs: dict = {}
        for key, value in mapping.items():
            if value is None:
                continue
            if key in ("corpus", "keywords_en", "keywords_ja"):
                kwargs[key] = _as_tuple(value)
            elif key == "filter_keywords":
                kwargs[key] = _as_bool(key, value)
            elif key in ("k_core", "workers"):
                kwargs[key] = _as_int(key, value)
            elif key == "biplot_axes":
                parts = _as_tuple(value)
                kwargs[key] = tuple(_as_int(key, p) for p in parts)
            else:
                kwargs[key] = str(value)
        return cls(**kwargs)

    def to_dict(self) -> dict:
        return {
            "biplot_axes": list(self.biplot_axes),
            "corpus": list(self.corpus),
            "counting": self.counting,
            "dictionary_en": self.dictionary_en,
            "dictionary_ja": self.dictionary_ja,
            "filter_keywords": self.filter_keywords,
            "k_core": self.k_core,
            "keywords_en": list(self.keywords_en),
            "keywords_ja": list(self.keywords_ja),
            "multilabel": self.multilabel,
            "out_dir": self.out_dir,
            "pca_mode": self.pca_mode,
            "stopwords": self.stopwords,
            "valence_en": self.valence_en,
            "valence_ja": self.valence_ja,
            "workers": self.workers,
        }


def parse_config_text(text: str) -> dict[str, str]:
    """Flat ``key = value`` lines; '#' starts a comment."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"config line {lineno}: expected key = value")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if len(value) >= 2 and value[0] == value[-1] and value[0] in "'\"":
            value = value[1:-1]
        if not key:
            raise ConfigError(f"config line {lineno}: empty key")
        if key in out:
            raise ConfigError(f"config line {lineno}: duplicate key {key!r}")
        out[key] = value
    return out


def load_config(path: str | Path) -> dict[str, str]:
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file not found: {p}")
    return parse_config_text(p.read_text("utf-8"))


# -------------------------------------------------------------- resources

def _load_lexicons(cfg: PipelineConfig) -> dict[str, MoralLexicon]:
    out: dict[str, MoralLexicon] = {}
    for lang, path, mode in (
        (LANG_EN, cfg.dictionary_en, MatchMode.TOKEN_PREFIX),
        (LANG_JA, cfg.dictionary_ja, MatchMode.SUBSTRING_LONGEST),
    ):
        if path is None:
            out[lang] = default_lexicon(lang)
        else:
            if not Path(path).exists():
                raise ConfigError(f"dictionary file not found: {path}")
            out[lang] = load_dictionary(path, match_mode=mode, language_tag=lang)
    return out


def _load_valence(cfg: PipelineConfig) -> dict[str, ValenceLexicon]:
    out: dict[str, ValenceLexicon] = {}
    for lang, path in ((LANG_EN, cfg.valence_en), (LANG_JA, cfg.valence_ja)):
        if path is None:
            out[lang] = default_valence_lexicon(lang)
        else:
            if not Path(path).exists():
                raise ConfigError(f"valence lexicon file not found: {path}")
            out[lang] = load_valence_lexicon(path)
    return out


def _load_stopwords(cfg: PipelineConfig) -> frozenset[str]:
    if cfg.stopwords is None:
        return default_stopwords()
    if not Path(cfg.stopwords).exists():
        raise ConfigError(f"stopword file not found: {cfg.stopwords}")
    return load_stopwords(cfg.stopwords)


def _out_dir(cfg: PipelineConfig) -> Path:
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _require(out: Path, name: str, producer: str) -> Path:
    p = out / name
    if not p.exists():
        raise DataError(
            f"missing {name}; run the {producer!r} subcommand first"
        )
    return p


def _langs_with(out: Path, namer: Callable[[str], str]) -> list[str]:
    return [lang for lang in KNOWN_LANGS if (out / namer(lang)).exists()]


# ------------------------------------------------------- parallel scoring

_WORKER_LEXICONS: dict[str, MoralLexicon] = {}
_WORKER_STOPWORDS: frozenset[str] = frozenset()


def _score_worker_init(
    lexicons: dict[str, MoralLexicon], stopwords: frozenset[str]
) -> None:
    global _WORKER_LEXICONS, _WORKER_STOPWORDS
    _WORKER_LEXICONS = lexicons
    _WORKER_STOPWORDS = stopwords


def _score_chunk(
    args: tuple[list[TweetRecord], str]
) -> tuple[list[MoralScoredTweet], FilterStats]:
    records, counting = args
    stats = FilterStats()
    rows = list(
        score_corpus(
            records,
            _WORKER_LEXICONS,
            stopwords=_WORKER_STOPWORDS,
            counting=counting,
            stats=stats,
        )
    )
    return rows, stats


def _score_records(
    records: list[TweetRecord],
    lexicons: dict[str, MoralLexicon],
    stopwords: frozenset[str],
    counting: str,
    workers: int,
) -> tuple[list[MoralScoredTweet], FilterStats]:
    """Score serially or over a process pool; the result is identical
    either way because records are independent and get re-sorted."""
    if workers <= 1 or len(records) < 2:
        stats = FilterStats()
        rows = list(
            score_corpus(
                records,
                lexicons,
                stopwords=stopwords,
                counting=counting,
                stats=stats,
            )
        )
        return rows, stats

    chunk_size = max(1, math.ceil(len(records) / (workers * 4)))
    chunks = [
        (records[i : i + chunk_size], counting)
        for i in range(0, len(records), chunk_size)
    ]
    try:
        ctx = multiprocessing.get_context("fork")
    except ValueError:
        ctx = multiprocessing.get_context()
    stats = FilterStats()
    rows: list[MoralScoredTweet] = []
    with ctx.Pool(
        processes=workers,
        initializer=_score_worker_init,
        initargs=(lexicons, stopwords),
    ) as pool:
        for chunk_rows, chunk_stats in pool.map(_score_chunk, chunks):
            rows.extend(chunk_rows)
            stats.merge(chunk_stats)
    return rows, stats


# ----------------------------------------------------------------- stages

def _stage_score(cfg: PipelineConfig, written: list[Path]) -> None:
    if not cfg.corpus:
        raise ConfigError("no corpus files configured; set corpus = <paths>")
    out = _out_dir(cfg)
    lexicons = _load_lexicons(cfg)
    stopwords = _load_stopwords(cfg)
    keywords = {LANG_EN: cfg.keywords_en, LANG_JA: cfg.keywords_ja}

    ingested: dict[str, int] = {}
    unknown_language = 0
    filtered: list[TweetRecord] = []
    for path in cfg.corpus:
        if not Path(path).exists():
            raise ConfigError(f"corpus file not found: {path}")
        for rec in read_corpus(path):
            if rec.lang not in KNOWN_LANGS:
                unknown_language += 1
                continue
            ingested[rec.lang] = ingested.get(rec.lang, 0) + 1
            if cfg.filter_keywords and not keyword_filter(rec, keywords[rec.lang]):
                continue
            filtered.append(rec)

    filtered_path = out / FILTERED_NAME
    _io.write_jsonl(filtered_path, (record_to_json(r) for r in filtered))
    written.append(filtered_path)

    scored, stats = _score_records(
        filtered, lexicons, stopwords, cfg.counting, cfg.workers
    )

    by_lang: dict[str, list[MoralScoredTweet]] = {}
    for s in scored:
        by_lang.setdefault(s.lang, []).append(s)
    langs_present = sorted({r.lang for r in filtered})
    for lang in langs_present:
        rows = sorted(by_lang.get(lang, []), key=lambda s: s.id)
        path = out / scored_name(lang)
        _io.write_jsonl(path, (scored_to_json(s) for s in rows))
        written.append(path)

    stats_path = out / FILTER_STATS_NAME
    _io.write_json(
        stats_path,
        {
            "ingested": {k: ingested[k] for k in sorted(ingested)},
            "keyword_filtered": cfg.filter_keywords,
            "kept_after_keywords": len(filtered),
            "scoring": stats.to_dict(),
            "unknown_language": unknown_language,
        },
    )
    written.append(stats_path)

    share_rows = []
    for lang in langs_present:
        rows = by_lang.get(lang, [])
        total = len(rows)
        label_counts = {f: 0 for f in BASIC_FOUNDATIONS}
        for s in rows:
            for f in s.labels:
                label_counts[f] += 1
        for f in BASIC_FOUNDATIONS:
            share = label_counts[f] / total if total else 0.0
            share_rows.append((lang, f.value, label_counts[f], share))
    shares_path = out / SHARES_NAME
    _io.write_csv(shares_path, SHARES_HEADER, share_rows)
    written.append(shares_path)


def _read_filtered(out: Path) -> list[TweetRecord]:
    path = _require(out, FILTERED_NAME, "score")
    return list(read_corpus(path))


def _valence_one(
    rec: TweetRecord, vlex: dict[str, ValenceLexicon]
) -> ValenceResult:
    if rec.lang == LANG_JA:
        return valence_ja(clean_text_ja(rec.text, keep="!?"), vlex[LANG_JA])
    return valence_en(clean_tokens_en(rec.text), vlex[LANG_EN])


def _stage_valence(cfg: PipelineConfig, written: list[Path]) -> None:
    out = _out_dir(cfg)
    records = _read_filtered(out)
    vlex = _load_valence(cfg)

    by_lang: dict[str, list[tuple[str, str, ValenceResult]]] = {}
    for rec in records:
        result = _valence_one(rec, vlex)
        by_lang.setdefault(rec.lang, []).append((rec.id, rec.user_id, result))

    share_rows = []
    for lang in sorted(by_lang):
        rows = sorted(by_lang[lang], key=lambda t: t[0])
        path = out / valence_name(lang)
        _io.write_jsonl(
            path,
            (
                _io.fmt_json_line(
                    {
                        "id": tid,
                        "label": res.label,
                        "lang": lang,
                        "score": res.score,
                        "user_id": uid,
                    }
                )
                for tid, uid, res in rows
            ),
        )
        written.append(path)
        total = len(rows)
        for label in ("negative", "neutral", "positive"):
            count = sum(1 for _, _, res in rows if res.label == label)
            share_rows.append((lang, label, count, count / total if total else 0.0))
    shares_path = out / VALENCE_SHARES_NAME
    _io.write_csv(shares_path, VALENCE_SHARES_HEADER, share_rows)
    written.append(shares_path)


def _read_scored(out: Path) -> dict[str, list[ScoredRow]]:
    langs = _langs_with(out, scored_name)
    if not langs:
        raise DataError(
            "no scored tweet files in the output directory; "
            "run the 'score' subcommand first"
        )
    result: dict[str, list[ScoredRow]] = {}
    for lang in langs:
        rows: list[ScoredRow] = []
        with open(out / scored_name(lang), "r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if line:
                    rows.append(scored_row_from_json(line, lineno))
        result[lang] = rows
    return result


def _stage_profiles(cfg: PipelineConfig, written: list[Path]) -> None:
    out = _out_dir(cfg)
    scored = _read_scored(out)
    for lang in sorted(scored):
        profiles = build_profiles(scored[lang], multilabel=cfg.multilabel)
        labelled = assign_labels(profiles)
        rows = []
        for uid in sorted(profiles):
            prof = profiles[uid]
            label = labelled[uid].label.value if uid in labelled else ""
            rows.append(
                (uid, prof.tweet_count) + prof.label_counts + (label,)
            )
        path = out / profiles_name(lang)
        _io.write_csv(path, PROFILE_HEADER, rows)
        written.append(path)


def _read_profile_rows(out: Path, lang: str) -> list[dict]:
    header, rows = _io.read_csv(out / profiles_name(lang))
    if tuple(header) != PROFILE_HEADER:
        raise DataError(
            f"{profiles_name(lang)}: unexpected header {header!r}"
        )
    parsed = []
    for n, row in enumerate(rows, start=2):
        if len(row) != len(PROFILE_HEADER):
            raise DataError(
                f"{profiles_name(lang)} line {n}: expected "
                f"{len(PROFILE_HEADER)} fields, got {len(row)}"
            )
        try:
            parsed.append(
                {
                    "user_id": row[0],
                    "tweet_count": int(row[1]),
                    "label_counts": tuple(int(c) for c in row[2:7]),
                    "label": Foundation(row[7]) if row[7] else None,
                }
            )
        except ValueError as exc:
            raise DataError(
                f"{profiles_name(lang)} line {n}: {exc}"
            ) from None
    return parsed


def _stage_network(cfg: PipelineConfig, written: list[Path]) -> None:
    out = _out_dir(cfg)
    records = _read_filtered(out)
    langs = _langs_with(out, profiles_name)
    if not langs:
        raise DataError(
            "no profile files in the output directory; "
            "run the 'profiles' subcommand first"
        )
    by_lang: dict[str, list[TweetRecord]] = {}
    for rec in records:
        by_lang.setdefault(rec.lang, []).append(rec)
    for lang in langs:
        labels = {
            row["user_id"]: row["label"]
            for row in _read_profile_rows(out, lang)
            if row["label"] is not None
        }
        net = build_network(by_lang.get(lang, []), labels)
        edges_path = out / edges_name(lang)
        _io.write_csv(edges_path, EDGE_HEADER, edge_rows(net))
        written.append(edges_path)
        core = k_core(net, cfg.k_core) if net.num_nodes else net
        gexf_path = out / gexf_name(lang)
        gexf_path.write_text(to_gexf(core), encoding="utf-8")
        written.append(gexf_path)


def _stage_homophily(cfg: PipelineConfig, written: list[Path]) -> None:
    out = _out_dir(cfg)
    langs = _langs_with(out, edges_name)
    if not langs:
        raise DataError(
            "no edge list files in the output directory; "
            "run the 'network' subcommand first"
        )
    for lang in langs:
        header, rows = _io.read_csv(out / edges_name(lang))
        if tuple(header) != EDGE_HEADER:
            raise DataError(f"{edges_name(lang)}: unexpected header {header!r}")
        net = network_from_edge_rows([tuple(r) for r in rows])
        report = network_homophily(net)
        path = out / homophily_name(lang)
        _io.write_csv(path, HOMOPHILY_HEADER, report.rows())
        written.append(path)


def _read_valence_scores(out: Path) -> dict[str, dict[str, float]]:
    """Per language: tweet id -> valence score."""
    import json

    langs = _langs_with(out, valence_name)
    if not langs:
        raise DataError(
            "no valence files in the output directory; "
            "run the 'valence' subcommand first"
        )
    result: dict[str, dict[str, float]] = {}
    for lang in langs:
        scores: dict[str, float] = {}
        with open(out / valence_name(lang), "r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    obj = json.loads(line)
                    scores[str(obj["id"])] = float(obj["score"])
                except (json.JSONDecodeError, KeyError, ValueError) as exc:
                    raise DataError(
                        f"{valence_name(lang)} line {lineno}: {exc}"
                    ) from None
        result[lang] = scores
    return result


def _kw_row(
    name: str, group_en: Sequence[float], group_ja: Sequence[float]
) -> tuple:
    if not group_en or not group_ja:
        return (name, "", "", "", len(group_en), len(group_ja), "insufficient data")
    res = statsmod.kruskal_wallis(group_en, group_ja)
    return (
        name,
        res.statistic,
        res.degrees_of_freedom,
        res.p_value,
        len(group_en),
        len(group_ja),
        "",
    )


def _stage_stats(cfg: PipelineConfig, written: list[Path]) -> None:
    out = _out_dir(cfg)
    scored = _read_scored(out)
    valence_scores = _read_valence_scores(out)

    loading_rows = []
    for i, f in enumerate(BASIC_FOUNDATIONS):
        groups = {}
        for lang in KNOWN_LANGS:
            groups[lang] = [
                row.loading.values[i] for row in scored.get(lang, [])
            ]
        loading_rows.append(
            _kw_row(f.value, groups[LANG_EN], groups[LANG_JA])
        )
    loadings_path = out / KW_LOADINGS_NAME
    _io.write_csv(loadings_path, KW_HEADER, loading_rows)
    written.append(loadings_path)

    def labelled_scores(lang: str, foundation: Foundation | None) -> list[float]:
        scores = valence_scores.get(lang, {})
        rows = scored.get(lang, [])
        out_vals = []
        for row in rows:
            if foundation is not None and foundation not in row.labels:
                continue
            score = scores.get(row.id)
            if score is not None:
                out_vals.append(score)
        return out_vals

    valence_rows = [
        _kw_row("all", labelled_scores(LANG_EN, None), labelled_scores(LANG_JA, None))
    ]
    for f in BASIC_FOUNDATIONS:
        valence_rows.append(
            _kw_row(f.value, labelled_scores(LANG_EN, f), labelled_scores(LANG_JA, f))
        )
    valence_path = out / KW_VALENCE_NAME
    _io.write_csv(valence_path, KW_HEADER, valence_rows)
    written.append(valence_path)


def _stage_pca(cfg: PipelineConfig, written: list[Path]) -> None:
    out = _out_dir(cfg)
    langs = _langs_with(out, profiles_name)
    if not langs:
        raise DataError(
            "no profile files in the output directory; "
            "run the 'profiles' subcommand first"
        )
    produced = 0
    for lang in langs:
        rows = [
            row
            for row in _read_profile_rows(out, lang)
            if row["tweet_count"] >= 2
        ]
        if len(rows) < 2:
            continue
        matrix = [
            [c / row["tweet_count"] for c in row["label_counts"]]
            for row in rows
        ]
        result = statsmod.pca(
            matrix,
            mode=cfg.pca_mode,
            dim_names=tuple(f.value for f in BASIC_FOUNDATIONS),
        )
        scree_path = out / pca_name("scree", lang)
        _io.write_csv(scree_path, statsmod.SCREE_HEADER, statsmod.scree_rows(result))
        written.append(scree_path)
        heatmap_path = out / pca_name("heatmap", lang)
        _io.write_csv(
            heatmap_path,
            statsmod.heatmap_header(result),
            statsmod.heatmap_rows(result),
        )
        written.append(heatmap_path)
        biplot_path = out / pca_name("biplot", lang)
        _io.write_csv(
            biplot_path,
            statsmod.biplot_header(cfg.biplot_axes),
            statsmod.biplot_rows(
                result,
                axes=cfg.biplot_axes,
                row_names=[row["user_id"] for row in rows],
            ),
        )
        written.append(biplot_path)
        produced += 1
    if not produced:
        raise DataError(
            "no language had at least two users with two labelled tweets; "
            "nothing to decompose"
        )


STAGES: dict[str, Callable[[PipelineConfig, list[Path]], None]] = {
    "score": _stage_score,
    "valence": _stage_valence,
    "profiles": _stage_profiles,
    "network": _stage_network,
    "homophily": _stage_homophily,
    "stats": _stage_stats,
    "pca": _stage_pca,
}


def run_stage(name: str, cfg: PipelineConfig) -> list[Path]:
    """Run one stage; on failure its partial outputs are removed."""
    fn = STAGES.get(name)
    if fn is None:
        raise ConfigError(f"unknown stage {name!r}")
    written: list[Path] = []
    try:
        fn(cfg, written)
    except BaseException as exc:
        for path in written:
            path.unlink(missing_ok=True)
        if isinstance(exc, ConfigError) or not isinstance(exc, MoralnetError):
            raise
        raise PipelineStageError(name, str(exc)) from exc
    return written


# --------------------------------------------------------------- manifest

def _manifest_counts(out: Path) -> dict:
    import json

    counts: dict = {}
    stats_path = out / FILTER_STATS_NAME
    if stats_path.exists():
        counts["filtering"] = json.loads(stats_path.read_text("utf-8"))
    scored: dict[str, int] = {}
    for lang in _langs_with(out, scored_name):
        with open(out / scored_name(lang), "r", encoding="utf-8") as fh:
            scored[lang] = sum(1 for line in fh if line.strip())
    counts["scored_tweets"] = scored
    labelled: dict[str, int] = {}
    for lang in _langs_with(out, profiles_name):
        labelled[lang] = sum(
            1
            for row in _read_profile_rows(out, lang)
            if row["label"] is not None
        )
    counts["labelled_users"] = labelled
    nodes: dict[str, int] = {}
    edges: dict[str, int] = {}
    for lang in _langs_with(out, edges_name):
        _, rows = _io.read_csv(out / edges_name(lang))
        edges[lang] = len(rows)
        nodes[lang] = len({r[0] for r in rows} | {r[1] for r in rows})
    counts["network_nodes"] = nodes
    counts["network_edges"] = edges
    return counts


def run_pipeline(cfg: PipelineConfig) -> dict:
    """Run every stage in order and finish with a hash manifest.

    Returns the manifest content; the manifest file itself is excluded
    from its own hash table.
    """
    out = _out_dir(cfg)
    written: list[Path] = []
    for name in STAGES:
        written.extend(run_stage(name, cfg))
    files = {}
    for path in sorted(set(written)):
        files[path.name] = {
            "bytes": path.stat().st_size,
            "sha256": _io.sha256_file(path),
        }
    manifest = {
        "config": cfg.to_dict(),
        "counts": _manifest_counts(out),
        "files": files,
    }
    _io.write_json(out / MANIFEST_NAME, manifest)
    return manifest
