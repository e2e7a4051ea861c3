"""Peer-review evaluation engine: scoring kernels and statistics.

The heavy lifting lives in the compiled `_revq` extension; this package
re-exports its operations.
"""

from ._revq import (
    CandidateWork,
    PrismError,
    SchemaViolation,
    aggregate_claim,
    aspect_distribution,
    compute_doa,
    compute_mcs,
    compute_ncps,
    dedup_candidates,
    filter_candidates,
    holm_correction,
    jensen_shannon_divergence,
    mann_whitney_u,
    mmr_select,
    novelty_metrics,
    parse_strict_json,
    pearson_with_ttest,
    render_prompt,
    request_digest,
    shannon_entropy,
    trigram_cosine,
    wilcoxon_signed_rank,
)

__all__ = [
    "CandidateWork",
    "PrismError",
    "SchemaViolation",
    "aggregate_claim",
    "aspect_distribution",
    "compute_doa",
    "compute_mcs",
    "compute_ncps",
    "dedup_candidates",
    "filter_candidates",
    "holm_correction",
    "jensen_shannon_divergence",
    "mann_whitney_u",
    "mmr_select",
    "novelty_metrics",
    "parse_strict_json",
    "pearson_with_ttest",
    "render_prompt",
    "request_digest",
    "shannon_entropy",
    "trigram_cosine",
    "wilcoxon_signed_rank",
]
