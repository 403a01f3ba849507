"""Key-phrase extraction, weighted ranking and topic curation for abstract corpora."""

from ._core import (
    Band,
    CurationError,
    CurationSession,
    DataError,
    Decision,
    PlotRow,
    RankedEntry,
    Registry,
    ScoredPhrase,
    SourceKind,
    SourceRecord,
    Token,
    Topic,
    UsageError,
    apply_rules,
    corpus_stats,
    export_plot_data,
    extract_ngrams,
    extract_rake,
    is_fox_stopword,
    load_ranked_tsv,
    load_rules,
    porter_stem,
    preprocess,
    rank_abstracts,
    ranked_tsv,
    tokenize,
)

__all__ = [
    "Band",
    "CurationError",
    "CurationSession",
    "DataError",
    "Decision",
    "PlotRow",
    "RankedEntry",
    "Registry",
    "ScoredPhrase",
    "SourceKind",
    "SourceRecord",
    "Token",
    "Topic",
    "UsageError",
    "apply_rules",
    "corpus_stats",
    "export_plot_data",
    "extract_ngrams",
    "extract_rake",
    "is_fox_stopword",
    "load_ranked_tsv",
    "load_rules",
    "porter_stem",
    "preprocess",
    "rank_abstracts",
    "ranked_tsv",
    "tokenize",
]
