#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "revq/judge/client.hpp"
#include "revq/retrieval/client.hpp"
#include "revq/review.hpp"
#include "revq/vocab.hpp"

namespace revq::novelty {

struct Contribution {
  std::string name;
  std::string author_claim_text;
  std::string description;
  std::string source_hint;
};

/// A verbatim novelty claim taken from the review.
struct NoveltyClaim {
  std::string claim_id;
  std::string text;
  vocab::Stance stance = vocab::Stance::Unclear;
  std::string confidence_lang;
  std::vector<std::string> prior_work_strings;
};

struct NoveltyExtraction {
  std::string core_task;
  std::vector<Contribution> contributions;
  std::vector<std::string> key_terms;
  std::vector<std::string> must_have_entities;
  std::vector<NoveltyClaim> claims;
  std::vector<std::string> all_citations_raw;
  /// Claims whose text failed the verbatim containment check, dropped.
  std::vector<std::string> dropped_claim_ids;

  retrieval::ExtractionAnchors anchors() const;
};

struct PairVerdict {
  std::string claim_id;
  std::string candidate_id;
  int score = 0;  // s(c_i, b_j) in [-2, 2]
  vocab::VerdictLabel label = vocab::VerdictLabel::Ambiguous;
  std::string stance_alignment;
  std::string calibration;
  std::string explanation;
};

struct NoveltyResult {
  std::vector<double> per_claim_scores;
  double mean_raw = 0.0;       // S-bar in [-2, 2]
  double ns = 0.0;             // (S-bar + 2) / 4
  double sr = 0.0;             // fraction with score >= 1
  double ssr = 0.0;            // fraction with score == 2
  double claims_per_review = 0.0;
};

enum class AggregationPolicy { Top3Weighted, Max };

AggregationPolicy aggregation_policy_from_name(std::string_view name);
std::string_view aggregation_policy_name(AggregationPolicy policy);

/// Deterministic regex pass over the raw review collecting citation-looking
/// strings (author-year patterns, arXiv ids, URLs), deduplicated in order of
/// first appearance.
std::vector<std::string> extract_citation_strings(const std::string& review_text);

/// Phase-1 structured target extraction. Claims failing the verbatim
/// containment check against the review are dropped and logged on the result.
/// Zero claims is not an error.
NoveltyExtraction extract_targets(const judge::JudgeClient& client,
                                  const std::string& paper_text,
                                  const ReviewDocument& review);

/// Phase-3 pairwise verification of one claim against one candidate.
PairVerdict verify_pair(const judge::JudgeClient& client,
                        const NoveltyClaim& claim,
                        const retrieval::CandidateWork& candidate,
                        const std::string& paper_context);

/// Relevance-weighted top-3 aggregation (default) or max pooling (ablation).
/// Top-3 selection is by relevance descending, ties by candidate id ascending;
/// all-zero relevances fall back to the unweighted mean of the first three
/// verdicts in input order.
double aggregate_claim(const std::vector<PairVerdict>& verdicts,
                       const std::map<std::string, double>& relevances,
                       AggregationPolicy policy = AggregationPolicy::Top3Weighted);

/// NS / SR / SSR from per-claim scores; nullopt when no claims were scored.
std::optional<NoveltyResult> compute_novelty_metrics(
    const std::vector<double>& per_claim);

/// Normalized stance counts in (not_novel, somewhat_novel, novel, unclear)
/// order.
std::vector<double> stance_distribution(const std::vector<NoveltyClaim>& claims);

judge::SlotMap extraction_slots(const std::string& paper_text,
                                const std::string& review_text);
judge::SlotMap verdict_slots(const std::string& claim_text,
                             const std::string& paper_context,
                             const retrieval::CandidateWork& candidate);

struct PipelineInputs {
  std::string paper_text;
  std::string paper_context;  // abstract + introduction
  int submission_year = 0;
  std::size_t mmr_k = 30;
  double mmr_lambda = 0.5;
  double dedup_threshold = 0.96;
  int per_query_limit = 20;
  AggregationPolicy policy = AggregationPolicy::Top3Weighted;
};

struct PipelineArtifacts {
  NoveltyExtraction extraction;
  std::vector<retrieval::CandidateWork> pool;
  std::vector<PairVerdict> verdicts;
};

/// Extraction -> retrieval -> verification -> aggregation for one review.
/// Returns nullopt when the review yields no scoreable claims.
std::optional<NoveltyResult> run_pipeline(const judge::JudgeClient& judge,
                                          retrieval::ScholarClient& scholar,
                                          const ReviewDocument& review,
                                          const PipelineInputs& inputs,
                                          PipelineArtifacts* artifacts = nullptr);

}  // namespace revq::novelty
