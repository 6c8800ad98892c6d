"""Deterministic discourse-framing toolkit for short-text corpora."""

__version__ = "0.1.0"

from .corpus import (  # noqa: F401
    DEFAULT_HASHTAGS,
    CollectionLedger,
    Corpus,
    CorpusError,
    Tweet,
    build_ledger,
    collection_pipeline,
    dedup_by_author,
    drop_retweets,
    filter_by_hashtags,
    load_corpus,
    save_corpus,
)
from .frames import (  # noqa: F401
    FRAME_ORDER,
    FrameCoverage,
    FrameLexicon,
    FrameMatch,
    LexiconError,
    builtin_lexicon,
    builtin_lexicons,
    contingency,
    coverage,
    frame_topic_profile,
    load_lexicon,
    match,
    truncate,
)
from .report import (  # noqa: F401
    ReportConfig,
    ReportError,
    build_report,
    compare_corpora,
    load_labels,
    save_labels,
)
from .stats import (  # noqa: F401
    CochranResult,
    DegenerateInputError,
    ZipfFit,
    chi2_sf,
    cochran_q,
    zipf_fit,
)
from .textprep import (  # noqa: F401
    BagOfWords,
    PreprocessConfig,
    Vocabulary,
    build_vocabulary,
    preprocess,
    to_bow,
    tokenize,
    top_terms,
)
from .topicmodel import (  # noqa: F401
    InferenceResult,
    LdaConfig,
    LdaModel,
    ModelFormatError,
    VisData,
    coherence,
    export_vis,
    infer,
    top_topic_terms,
    train,
)
