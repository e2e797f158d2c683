"""Threshold-gated graph-of-thought abstract generation."""

from ._core import (
    Article,
    Corpus,
    Reference,
    Section,
    approx_token_count,
    fit_gumbel,
    gumbel_cdf,
    gumbel_pdf,
    gumbel_threshold,
    load_corpus,
    rouge_1,
    rouge_2,
    rouge_l,
    run_article,
    save_corpus,
    synthesize_corpus,
    tokenize,
    train_thresholds,
)

__all__ = [
    "Article",
    "Corpus",
    "Reference",
    "Section",
    "approx_token_count",
    "fit_gumbel",
    "gumbel_cdf",
    "gumbel_pdf",
    "gumbel_threshold",
    "load_corpus",
    "rouge_1",
    "rouge_2",
    "rouge_l",
    "run_article",
    "save_corpus",
    "synthesize_corpus",
    "tokenize",
    "train_thresholds",
]
