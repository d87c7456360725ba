"""Command line front end.

One subcommand per pipeline stage plus ``synth`` (build a verification
corpus) and ``report`` (run everything and write the manifest). Exit
codes: 0 on success, 2 for configuration problems, 3 for data problems.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__, _io
from .errors import ConfigError, MoralnetError, SynthesisError
from .lexicon import serialize_dictionary
from .pipeline import (
    PipelineConfig,
    load_config,
    pca_name,
    run_pipeline,
    run_stage,
)
from .synth import SyntheticSpec, generate_synthetic
from .textprep import KNOWN_LANGS, LANG_EN, record_to_json

SYNTH_CORPUS_NAME = "synth_corpus.jsonl"
SYNTH_DICTIONARY_NAME = "synth_dictionary.dic"
SYNTH_TRUTH_NAME = "synth_truth.json"

_STAGE_COMMANDS = (
    "score",
    "valence",
    "profiles",
    "network",
    "homophily",
    "stats",
    "pca",
)


def _add_common_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--config", metavar="FILE", help="flat key = value config file"
    )
    parser.add_argument(
        "--corpus",
        action="append",
        metavar="FILE",
        help="corpus JSONL file (repeatable)",
    )
    parser.add_argument("--out", metavar="DIR", help="output directory")
    parser.add_argument("--dictionary-en", metavar="FILE")
    parser.add_argument("--dictionary-ja", metavar="FILE")
    parser.add_argument("--valence-en", metavar="FILE")
    parser.add_argument("--valence-ja", metavar="FILE")
    parser.add_argument("--stopwords", metavar="FILE")
    parser.add_argument(
        "--keywords-en", metavar="WORDS", help="comma-separated keyword list"
    )
    parser.add_argument(
        "--keywords-ja", metavar="WORDS", help="comma-separated keyword list"
    )
    parser.add_argument(
        "--no-keyword-filter",
        action="store_true",
        help="keep records regardless of keywords",
    )
    parser.add_argument("--counting", choices=("multiset", "set"))
    parser.add_argument("--multilabel", choices=("each", "drop"))
    parser.add_argument("--k-core", type=int, metavar="K")
    parser.add_argument("--pca-mode", choices=("covariance", "correlation"))
    parser.add_argument(
        "--biplot-axes", metavar="I,J", help="two 1-based component numbers"
    )
    parser.add_argument("--workers", type=int, metavar="N")


def _assemble_config(args: argparse.Namespace) -> PipelineConfig:
    mapping: dict = {}
    if args.config:
        mapping.update(load_config(args.config))
    overrides = {
        "corpus": args.corpus,
        "out_dir": args.out,
        "dictionary_en": args.dictionary_en,
        "dictionary_ja": args.dictionary_ja,
        "valence_en": args.valence_en,
        "valence_ja": args.valence_ja,
        "stopwords": args.stopwords,
        "keywords_en": args.keywords_en,
        "keywords_ja": args.keywords_ja,
        "counting": args.counting,
        "multilabel": args.multilabel,
        "k_core": args.k_core,
        "pca_mode": args.pca_mode,
        "biplot_axes": args.biplot_axes,
        "workers": args.workers,
    }
    for key, value in overrides.items():
        if value is not None:
            mapping[key] = value
    if args.no_keyword_filter:
        mapping["filter_keywords"] = False
    return PipelineConfig.from_mapping(mapping)


def _print_written(paths) -> None:
    for path in paths:
        print(f"wrote {path}")


def _render_svg(cfg: PipelineConfig) -> list[Path]:
    """Turn the emitted component tables into standalone figures."""
    from .plot import svg_bar_chart, svg_scatter

    out = Path(cfg.out_dir)
    written: list[Path] = []
    for lang in KNOWN_LANGS:
        scree_csv = out / pca_name("scree", lang)
        if scree_csv.exists():
            _, rows = _io.read_csv(scree_csv)
            svg = svg_bar_chart(
                [r[0] for r in rows],
                [float(r[2]) for r in rows],
                f"explained variance ({lang})",
            )
            path = out / f"pca_scree_{lang}.svg"
            path.write_text(svg, encoding="utf-8")
            written.append(path)
        biplot_csv = out / pca_name("biplot", lang)
        if biplot_csv.exists():
            header, rows = _io.read_csv(biplot_csv)
            points = [
                (float(r[2]), float(r[3])) for r in rows if r[0] == "score"
            ]
            arrows = [
                (r[1], float(r[2]), float(r[3])) for r in rows if r[0] == "axis"
            ]
            svg = svg_scatter(
                points,
                arrows,
                f"user profiles ({lang})",
                header[2],
                header[3],
            )
            path = out / f"pca_biplot_{lang}.svg"
            path.write_text(svg, encoding="utf-8")
            written.append(path)
    return written


def _cmd_stage(args: argparse.Namespace) -> int:
    cfg = _assemble_config(args)
    written = run_stage(args.command, cfg)
    if args.command == "pca" and args.svg:
        written.extend(_render_svg(cfg))
    _print_written(written)
    return 0


def _cmd_report(args: argparse.Namespace) -> int:
    cfg = _assemble_config(args)
    manifest = run_pipeline(cfg)
    extra = _render_svg(cfg) if args.svg else []
    out = Path(cfg.out_dir)
    total = len(manifest["files"]) + len(extra)
    print(f"wrote {total} files and {out / 'manifest.json'}")
    return 0


def _cmd_synth(args: argparse.Namespace) -> int:
    spec = SyntheticSpec(
        num_users=args.users,
        homophily=args.homophily,
        num_labels=args.labels,
        tweets_per_user=args.tweets_per_user,
        seed=args.seed,
        lang=args.lang,
    )
    corpus = generate_synthetic(spec)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    corpus_path = out / SYNTH_CORPUS_NAME
    _io.write_jsonl(corpus_path, (record_to_json(r) for r in corpus.records))
    dict_path = out / SYNTH_DICTIONARY_NAME
    dict_path.write_bytes(serialize_dictionary(corpus.lexicon, "liwc"))
    truth_path = out / SYNTH_TRUTH_NAME
    _io.write_json(truth_path, corpus.truth())
    _print_written([corpus_path, dict_path, truth_path])
    print(
        f"planted homophily {float(corpus.achieved_homophily)!r} over "
        f"{spec.num_users} users, {len(corpus.edges)} edges"
    )
    dict_flag = "--dictionary-en" if spec.lang == LANG_EN else "--dictionary-ja"
    print(
        f"verify with: moralnet report --corpus {corpus_path} "
        f"{dict_flag} {dict_path} --out {out / 'check'}"
    )
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="moralnet",
        description=(
            "dictionary-based moral foundation scoring, user profiling, "
            "and retweet network homophily"
        ),
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    help_by_stage = {
        "score": "filter the corpus and score moral loadings",
        "valence": "score sentiment of the filtered corpus",
        "profiles": "aggregate tweet labels into user profiles",
        "network": "build the labelled retweet graph and its core",
        "homophily": "score label homophily on the edge lists",
        "stats": "compare languages with rank tests",
        "pca": "decompose user profiles into components",
    }
    for name in _STAGE_COMMANDS:
        p = sub.add_parser(name, help=help_by_stage[name])
        _add_common_options(p)
        if name == "pca":
            p.add_argument(
                "--svg", action="store_true", help="also render SVG figures"
            )
        p.set_defaults(func=_cmd_stage)

    p = sub.add_parser(name="report", help="run every stage and write a manifest")
    _add_common_options(p)
    p.add_argument("--svg", action="store_true", help="also render SVG figures")
    p.set_defaults(func=_cmd_report)

    p = sub.add_parser("synth", help="generate a corpus with known homophily")
    p.add_argument("--out", required=True, metavar="DIR")
    p.add_argument("--users", type=int, required=True, metavar="N")
    p.add_argument(
        "--homophily", type=float, required=True, metavar="P",
        help="target per-label homophily in [0, 1]",
    )
    p.add_argument("--labels", type=int, default=5, metavar="L")
    p.add_argument("--tweets-per-user", type=int, default=3, metavar="N")
    p.add_argument("--seed", type=int, default=0, metavar="S")
    p.add_argument("--lang", choices=KNOWN_LANGS, default=LANG_EN)
    p.set_defaults(func=_cmd_synth)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, SynthesisError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except MoralnetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
