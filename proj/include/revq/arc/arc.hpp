#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "revq/judge/client.hpp"
#include "revq/review.hpp"
#include "revq/vocab.hpp"

namespace revq::arc {

/// Atomic Review Comment: the smallest independent critique/suggestion unit.
struct AtomicComment {
  std::string arc_id;
  std::string text;
  std::string anchor_quote;  // verbatim 5-25 word substring of the review
  vocab::CommentType comment_type = vocab::CommentType::Observation;
  std::optional<std::array<int, 5>> d_scores;  // D1..D5, each in {0,1,2}

  /// Comment-Level Constructiveness: sum of the five scores over 10.
  double clc() const;
};

struct ConstructivenessResult {
  std::vector<double> per_arc_clc;
  double mcs = 0.0;                    // mean CLC
  std::array<double, 5> dim_means{};   // D1..D5 means on [0,2]
  double ar = 0.0;                     // fraction with D1 >= 1
  double sd = 0.0;                     // fraction with D4 == 2
  double cd = 0.0;                     // fraction with CLC >= 0.5 (inclusive)
};

/// Phase-1 ARC extraction. ARCs whose anchor quote is not a
/// whitespace-normalized substring of the review are dropped; their ids are
/// reported through dropped_arc_ids.
std::vector<AtomicComment> extract_arcs(
    const judge::JudgeClient& client, const ReviewDocument& review,
    std::vector<std::string>* dropped_arc_ids = nullptr);

/// Phase-2 scoring: every ARC receives D1-D5; output length equals input
/// length.
std::vector<AtomicComment> score_arcs(const judge::JudgeClient& client,
                                      std::vector<AtomicComment> arcs,
                                      const std::string& macro_context);

/// Aggregates scored ARCs; nullopt for an empty list.
std::optional<ConstructivenessResult> compute_mcs(
    const std::vector<AtomicComment>& arcs);

judge::SlotMap extraction_slots(const ReviewDocument& review);
judge::SlotMap scoring_slots(const std::vector<AtomicComment>& arcs,
                             const std::string& macro_context);

/// Extraction + scoring + aggregation for one review.
std::optional<ConstructivenessResult> run_pipeline(
    const judge::JudgeClient& client, const ReviewDocument& review,
    std::vector<AtomicComment>* arcs_out = nullptr);

}  // namespace revq::arc
