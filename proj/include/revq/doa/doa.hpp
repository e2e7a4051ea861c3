#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "revq/judge/client.hpp"
#include "revq/review.hpp"
#include "revq/vocab.hpp"

namespace revq::doa {

/// A segmented discourse unit with role, aspect and (for premises) grounding.
struct ArgumentUnit {
  std::string text;
  vocab::Role role = vocab::Role::Claim;
  vocab::Aspect aspect = vocab::Aspect::Methodology;
  std::optional<int> grounding;  // 0|1|2, premises only
  int ordinal = 0;               // position in review, 1-based
};

struct AspectHistogram {
  std::array<std::size_t, 4> counts{};  // indexed by vocab::Aspect
  std::size_t total() const;
};

struct DoAResult {
  std::size_t total_units = 0;    // |A|
  std::size_t premise_count = 0;  // |P|
  double premise_ratio = 0.0;     // R_prem
  double grounding_score = 0.0;   // S_depth, normalized by g_max = 2
  double doa = 0.0;
  AspectHistogram aspect_all;
  AspectHistogram aspect_premises;
};

/// Splits the judge-marked text at the separator and verifies that the spans
/// reconstruct the input (whitespace-normalized, markers removed, structural
/// headings skipped). Returns spans in input order.
/// Throws ReconstructionMismatch when the judge altered the text.
std::vector<std::string> split_marked_text(const std::string& marked,
                                           const std::string& original);

/// Phase-1 segmentation through the judge.
std::vector<std::string> segment_adus(const judge::JudgeClient& client,
                                      const ReviewDocument& review);

/// Phase-2 classification: every span receives exactly one role and aspect.
/// A length mismatch from the judge is retried once via cache bypass in
/// record mode and is an error in replay.
std::vector<ArgumentUnit> classify_adus(const judge::JudgeClient& client,
                                        const std::vector<std::string>& spans,
                                        const std::string& macro_context);

/// Phase-3 grounding: every premise gets g in {0,1,2}; claims untouched.
void grade_premises(const judge::JudgeClient& client,
                    std::vector<ArgumentUnit>& units,
                    const std::string& macro_context);

/// Closed-form DoA from graded units. |A| = 0 yields nullopt (absent, not 0);
/// |P| = 0 yields DoA = 0 by definition.
std::optional<DoAResult> compute_doa(const std::vector<ArgumentUnit>& units);

/// Normalized aspect distribution over (novelty, methodology, experiment,
/// clarity). Throws InvalidArgument when no unit qualifies.
std::vector<double> aspect_distribution(const std::vector<ArgumentUnit>& units,
                                        bool premises_only);

/// Slot builders shared by the pipeline and the fixture tooling.
judge::SlotMap segmentation_slots(const ReviewDocument& review);
judge::SlotMap classification_slots(const std::vector<std::string>& spans,
                                    const std::string& macro_context);
judge::SlotMap grounding_slots(const std::vector<ArgumentUnit>& units,
                               const std::string& macro_context);

/// Full three-phase pipeline for one review.
std::optional<DoAResult> run_pipeline(const judge::JudgeClient& client,
                                      const ReviewDocument& review,
                                      std::vector<ArgumentUnit>* units_out = nullptr);

}  // namespace revq::doa
