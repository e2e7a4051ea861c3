#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "revq/judge/client.hpp"
#include "revq/review.hpp"
#include "revq/vocab.hpp"

namespace revq::flaw {

struct FlawContribution {
  std::string reviewer_id;
  std::string argument_text;  // verbatim argument from that reviewer
};

/// A consensus-atomized criticism of the manuscript.
struct MicroFlaw {
  std::string flaw_id;
  std::string description;
  std::string macro_topic;  // one of the 7-topic taxonomy
  std::vector<FlawContribution> contributors;
  std::optional<bool> is_valid;              // filled by adjudication
  std::optional<vocab::Severity> severity;   // valid flaws only

  bool contributed_by(const std::string& reviewer_id) const;
};

struct RankedEntry {
  std::string flaw_id;
  int position = 0;  // 1-based, strictly increasing
  int weight = 0;    // severity weight, 2 critical / 1 minor
};

struct RankedFlawList {
  std::string reviewer_id;
  std::vector<RankedEntry> entries;
  /// Valid attributed flaws whose argument text could not be located in the
  /// review; excluded from nCPS but kept in recall.
  std::vector<std::string> unlocatable_flaw_ids;
};

struct FlawScores {
  std::optional<double> critical_recall;
  std::optional<double> minor_recall;
  std::optional<double> ncps;
  std::size_t valid_critical = 0;   // valid attributed flaws, by severity
  std::size_t valid_minor = 0;
  std::size_t hallucinated = 0;     // attributed flaws adjudicated invalid
  std::size_t extracted = 0;        // all attributed flaws (= valid + invalid)
};

/// Severity weights w_i; {2,1} per the scoring definition. Override only for
/// explicit experimentation.
struct SeverityWeights {
  int critical = 2;
  int minor = 1;
  int of(vocab::Severity s) const {
    return s == vocab::Severity::Critical ? critical : minor;
  }
};

/// Phase-1 consensus atomization across every review of one paper.
std::vector<MicroFlaw> atomize_flaws(const judge::JudgeClient& client,
                                     const std::vector<ReviewDocument>& reviews);

/// Phase-2 adjudication against the manuscript: validity for every flaw,
/// severity for the valid ones.
std::vector<MicroFlaw> adjudicate_flaws(const judge::JudgeClient& client,
                                        std::vector<MicroFlaw> flaws,
                                        const std::string& paper_text);

/// Locates each valid attributed flaw at the first occurrence of its
/// contributing argument text in the review (whitespace-normalized substring
/// search) and renumbers positions 1..k in textual order.
RankedFlawList recover_positions(const ReviewDocument& review,
                                 const std::vector<MicroFlaw>& attributed,
                                 SeverityWeights weights = {});

/// Severity-stratified recall of the consensus (valid) flaw bank. A severity
/// with an empty consensus yields an absent recall.
std::pair<std::optional<double>, std::optional<double>> compute_recall(
    const std::vector<MicroFlaw>& consensus,
    const std::set<std::string>& reviewer_flaw_ids);

/// nCPS = CPS / iCPS with position discount log2(p+1); the ideal ordering
/// places every critical flaw before every minor one over positions 1..k.
/// Empty list yields absent (never 1.0).
std::optional<double> compute_ncps(const RankedFlawList& ranked);

/// Scores for one reviewer given the adjudicated consensus bank.
FlawScores score_reviewer(const ReviewDocument& review,
                          const std::vector<MicroFlaw>& adjudicated,
                          SeverityWeights weights = {});

judge::SlotMap atomization_slots(const std::vector<ReviewDocument>& reviews);
judge::SlotMap adjudication_slots(const std::vector<MicroFlaw>& flaws,
                                  const std::string& paper_text);

}  // namespace revq::flaw
