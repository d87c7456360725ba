"""Moral foundation scoring and retweet network homophily analysis.

The package scores short texts against a moral foundations dictionary,
labels them by their dominant foundation, aggregates per-user moral
profiles, and measures label homophily on the retweet graph, with rank
tests and principal components on top. See the ``moralnet`` command for
the batch pipeline.
"""

__version__ = "0.1.0"

from .errors import (
    ConfigError,
    DataError,
    DictionaryError,
    MoralnetError,
    PipelineStageError,
    SynthesisError,
)
from .graph import (
    HomophilyReport,
    RetweetNetwork,
    build_network,
    k_core,
    network_homophily,
    node_homophily,
)
from .lexicon import (
    BASIC_FOUNDATIONS,
    DictionaryWarning,
    Foundation,
    MatchMode,
    MoralLexicon,
    MoralTerm,
    Polarity,
    default_lexicon,
    load_dictionary,
    parse_dictionary,
    serialize_dictionary,
)
from .pipeline import PipelineConfig, run_pipeline, run_stage
from .profiles import UserMoralProfile, assign_labels, build_profiles
from .scoring import (
    FilterStats,
    MoralLoadingVector,
    MoralScoredTweet,
    label_tweet,
    moral_loading,
    score_corpus,
    score_record,
)
from .stats import KruskalWallisResult, PcaResult, chi2_sf, kruskal_wallis, pca
from .synth import SyntheticCorpus, SyntheticSpec, generate_synthetic
from .textprep import TweetRecord, keyword_filter, preprocess, read_corpus
from .valence import ValenceLexicon, ValenceResult, valence_en, valence_ja

__all__ = [
    "BASIC_FOUNDATIONS",
    "ConfigError",
    "DataError",
    "DictionaryError",
    "DictionaryWarning",
    "FilterStats",
    "Foundation",
    "HomophilyReport",
    "KruskalWallisResult",
    "MatchMode",
    "MoralLexicon",
    "MoralLoadingVector",
    "MoralScoredTweet",
    "MoralTerm",
    "MoralnetError",
    "PcaResult",
    "PipelineConfig",
    "PipelineStageError",
    "Polarity",
    "RetweetNetwork",
    "SynthesisError",
    "SyntheticCorpus",
    "SyntheticSpec",
    "TweetRecord",
    "UserMoralProfile",
    "ValenceLexicon",
    "ValenceResult",
    "assign_labels",
    "build_network",
    "build_profiles",
    "chi2_sf",
    "default_lexicon",
    "generate_synthetic",
    "k_core",
    "keyword_filter",
    "kruskal_wallis",
    "label_tweet",
    "load_dictionary",
    "moral_loading",
    "network_homophily",
    "node_homophily",
    "parse_dictionary",
    "pca",
    "preprocess",
    "read_corpus",
    "run_pipeline",
    "run_stage",
    "score_corpus",
    "score_record",
    "serialize_dictionary",
    "valence_en",
    "valence_ja",
]
