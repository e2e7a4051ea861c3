#pragma once

#include <map>
#include <string>

namespace revq {

/// Canonical review section names.
inline constexpr const char* kSectionSummary = "summary";
inline constexpr const char* kSectionStrengths = "strengths";
inline constexpr const char* kSectionWeaknesses = "weaknesses";
inline constexpr const char* kSectionQuestions = "questions";

/// One reviewer's text for one manuscript. A "reviewer" may be a single
/// generated review or a concatenated bundle of human reviews, in which case
/// review_count carries the number of merged reviews.
struct ReviewDocument {
  std::string reviewer_id;
  std::string reviewer_type;  // "human" or a system name
  std::map<std::string, std::string> sections;
  int review_count = 1;

  bool is_human() const { return reviewer_type == "human"; }

  std::string section(const std::string& name) const {
    auto it = sections.find(name);
    return it == sections.end() ? std::string() : it->second;
  }

  /// Concatenation of the given sections, with labeled headings, skipping
  /// empty ones.
  std::string sections_text(std::initializer_list<const char*> names) const;

  /// Summary + Strengths + Weaknesses (argument-mining input).
  std::string core_sections_text() const {
    return sections_text({kSectionSummary, kSectionStrengths, kSectionWeaknesses});
  }

  /// Summary + Weaknesses + Questions (flaw-extraction input).
  std::string flaw_sections_text() const {
    return sections_text({kSectionSummary, kSectionWeaknesses, kSectionQuestions});
  }

  /// Every section in canonical order, then any extras alphabetically.
  std::string full_text() const;

  bool operator==(const ReviewDocument&) const = default;
};

}  // namespace revq
