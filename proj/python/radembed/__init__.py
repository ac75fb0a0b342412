"""Radical-enhanced Chinese character embeddings and CRF word segmentation."""

from ._radembed import (
    ConfigError,
    CrfConfig,
    DataError,
    Embeddings,
    NumericError,
    Segmenter,
    TrainConfig,
    bies_to_words,
    category_accuracy,
    load_embeddings,
    load_segmenter,
    log_partition,
    score_segmentation,
    set_quiet,
    train_embeddings,
    train_segmenter,
    viterbi,
    words_to_bies,
)

__all__ = [
    "ConfigError",
    "CrfConfig",
    "DataError",
    "Embeddings",
    "NumericError",
    "Segmenter",
    "TrainConfig",
    "bies_to_words",
    "category_accuracy",
    "load_embeddings",
    "load_segmenter",
    "log_partition",
    "score_segmentation",
    "set_quiet",
    "train_embeddings",
    "train_segmenter",
    "viterbi",
    "words_to_bies",
]
