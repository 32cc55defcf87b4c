"""ROUGE and embedding-augmented ROUGE-WE summarization metrics."""

__version__ = "0.1.0"

from .correlation import (
    CorrelationTriple,
    ScoreVector,
    UndefinedCorrelationError,
    align_by_label,
    correlation_triple,
    kendall,
    pearson,
    spearman,
)
from .embeddings import (
    EmbeddingFormatError,
    EmbeddingTable,
    EmbeddingTruncationError,
    load_binary,
    load_text,
    save_binary,
    similarity,
)
from .harness import (
    CorpusLoadError,
    HumanJudgments,
    JudgmentsFormatError,
    MetaEvalError,
    MetaEvalReport,
    MetricConfig,
    Topic,
    load_corpus,
    load_judgments,
    meta_evaluate,
    score_corpus,
    write_reports,
)
from .rouge import (
    DEFAULT_VARIANTS,
    ROUGE_1,
    ROUGE_2,
    ROUGE_SU4,
    MatchFunction,
    RougeScore,
    RougeVariant,
    extract_units,
    f_exact,
    f_we,
    greedy_soft_overlap,
    rouge_score,
    soft_overlap,
)
from .textpipe import (
    DEFAULT_CONFIG,
    NGram,
    NGramMultiset,
    TokenizeConfig,
    TokenSequence,
    extract_ngrams,
    extract_skip_bigrams,
    load_stopwords,
    tokenize,
)

__all__ = [
    "CorrelationTriple",
    "ScoreVector",
    "UndefinedCorrelationError",
    "align_by_label",
    "correlation_triple",
    "kendall",
    "pearson",
    "spearman",
    "EmbeddingFormatError",
    "EmbeddingTable",
    "EmbeddingTruncationError",
    "load_binary",
    "load_text",
    "save_binary",
    "similarity",
    "CorpusLoadError",
    "HumanJudgments",
    "JudgmentsFormatError",
    "MetaEvalError",
    "MetaEvalReport",
    "MetricConfig",
    "Topic",
    "load_corpus",
    "load_judgments",
    "meta_evaluate",
    "score_corpus",
    "write_reports",
    "DEFAULT_VARIANTS",
    "ROUGE_1",
    "ROUGE_2",
    "ROUGE_SU4",
    "MatchFunction",
    "RougeScore",
    "RougeVariant",
    "extract_units",
    "f_exact",
    "f_we",
    "greedy_soft_overlap",
    "rouge_score",
    "soft_overlap",
    "DEFAULT_CONFIG",
    "NGram",
    "NGramMultiset",
    "TokenizeConfig",
    "TokenSequence",
    "extract_ngrams",
    "extract_skip_bigrams",
    "load_stopwords",
    "tokenize",
]
