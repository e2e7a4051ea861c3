#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace revq::vocab {

enum class Aspect { Novelty, Methodology, Experiment, Clarity };
enum class Role { Claim, Premise };
enum class Stance { NotNovel, SomewhatNovel, Novel, Unclear };
enum class VerdictLabel { Supported, Overstated, Ambiguous, Understated, Unsupported };
enum class Severity { Critical, Minor };
enum class CommentType { Weakness, Strength, Question, Suggestion, Observation };

inline constexpr std::array<std::string_view, 4> kAspectNames = {
    "novelty", "methodology", "experiment", "clarity"};
inline constexpr std::array<std::string_view, 2> kRoleNames = {"claim", "premise"};
inline constexpr std::array<std::string_view, 4> kStanceNames = {
    "not_novel", "somewhat_novel", "novel", "unclear"};
inline constexpr std::array<std::string_view, 5> kVerdictLabelNames = {
    "SUPPORTED", "OVERSTATED", "AMBIGUOUS", "UNDERSTATED", "UNSUPPORTED"};
inline constexpr std::array<std::string_view, 2> kSeverityNames = {"Critical",
                                                                   "Minor"};
inline constexpr std::array<std::string_view, 5> kCommentTypeNames = {
    "weakness", "strength", "question", "suggestion", "observation"};

/// The seven macro-topics of the flaw taxonomy.
inline constexpr std::array<std::string_view, 7> kMacroTopics = {
    "Novelty & Contribution",
    "Clarity & Presentation",
    "Applicability, Scalability & Limitations",
    "Experimental Design & Evaluation",
    "Related Work & Citations",
    "Methodology & Theoretical Soundness",
    "Reproducibility & Open Science",
};

/// Fixed verdict scale: +2 SUPPORTED ... -2 UNSUPPORTED.
inline constexpr int verdict_score(VerdictLabel label) {
  switch (label) {
    case VerdictLabel::Supported: return 2;
    case VerdictLabel::Overstated: return 1;
    case VerdictLabel::Ambiguous: return 0;
    case VerdictLabel::Understated: return -1;
    case VerdictLabel::Unsupported: return -2;
  }
  return 0;
}

template <typename Enum, std::size_t N>
std::optional<Enum> parse_enum(const std::array<std::string_view, N>& names,
                               std::string_view s) {
  for (std::size_t i = 0; i < N; ++i)
    if (names[i] == s) return static_cast<Enum>(i);
  return std::nullopt;
}

inline std::optional<Aspect> parse_aspect(std::string_view s) {
  return parse_enum<Aspect>(kAspectNames, s);
}
inline std::optional<Role> parse_role(std::string_view s) {
  return parse_enum<Role>(kRoleNames, s);
}
inline std::optional<Stance> parse_stance(std::string_view s) {
  return parse_enum<Stance>(kStanceNames, s);
}
inline std::optional<VerdictLabel> parse_verdict_label(std::string_view s) {
  return parse_enum<VerdictLabel>(kVerdictLabelNames, s);
}
inline std::optional<Severity> parse_severity(std::string_view s) {
  return parse_enum<Severity>(kSeverityNames, s);
}
inline std::optional<CommentType> parse_comment_type(std::string_view s) {
  return parse_enum<CommentType>(kCommentTypeNames, s);
}

inline std::string_view name_of(Aspect a) {
  return kAspectNames[static_cast<std::size_t>(a)];
}
inline std::string_view name_of(Role r) {
  return kRoleNames[static_cast<std::size_t>(r)];
}
inline std::string_view name_of(Stance s) {
  return kStanceNames[static_cast<std::size_t>(s)];
}
inline std::string_view name_of(VerdictLabel l) {
  return kVerdictLabelNames[static_cast<std::size_t>(l)];
}
inline std::string_view name_of(Severity s) {
  return kSeverityNames[static_cast<std::size_t>(s)];
}
inline std::string_view name_of(CommentType c) {
  return kCommentTypeNames[static_cast<std::size_t>(c)];
}

}  // namespace revq::vocab
