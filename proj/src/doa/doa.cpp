#include "revq/doa/doa.hpp"

#include <algorithm>
#include <cctype>

#include <json.hpp>

#include "revq/errors.hpp"
#include "revq/text.hpp"

namespace revq::doa {

namespace {

using nlohmann::json;

constexpr std::string_view kSeparator = "<sep>";

const char* kHeadingNames[] = {"summary",   "strengths",   "weaknesses",
                               "questions", "suggestions", "limitations"};

/// Strips one leading structural heading ("Summary:", "**Weaknesses:**", ...)
/// from a span; segmentation is told to leave headings unmarked, so they
/// arrive glued to the first unit of their section.
std::string strip_leading_heading(std::string span) {
  std::string probe = text::to_lower(text::trim(span));
  std::size_t skip = 0;
  std::size_t stars = 0;
  while (stars < probe.size() && (probe[stars] == '*' || probe[stars] == '#'))
    ++stars;
  for (const char* name : kHeadingNames) {
    std::string_view n(name);
    if (probe.compare(stars, n.size(), n) != 0) continue;
    std::size_t pos = stars + n.size();
    while (pos < probe.size() && (probe[pos] == '*' || probe[pos] == ' ')) ++pos;
    if (pos < probe.size() && probe[pos] == ':') {
      skip = pos + 1;
      break;
    }
  }
  if (skip == 0) return span;
  std::string trimmed = text::trim(span);
  return text::trim(trimmed.substr(std::min(skip, trimmed.size())));
}

std::string remove_markers(const std::string& marked) {
  std::string out;
  out.reserve(marked.size());
  std::size_t pos = 0;
  while (pos < marked.size()) {
    std::size_t next = marked.find(kSeparator, pos);
    if (next == std::string::npos) {
      out.append(marked, pos, std::string::npos);
      break;
    }
    out.append(marked, pos, next - pos);
    out.push_back(' ');
    pos = next + kSeparator.size();
  }
  return out;
}

}  // namespace

std::size_t AspectHistogram::total() const {
  std::size_t t = 0;
  for (auto c : counts) t += c;
  return t;
}

std::vector<std::string> split_marked_text(const std::string& marked,
                                           const std::string& original) {
  if (text::normalize_ws(remove_markers(marked)) != text::normalize_ws(original))
    throw ReconstructionMismatch(
        "segmented text does not reconstruct the input review");

  std::vector<std::string> spans;
  for (std::string& piece : text::split_on(marked, kSeparator)) {
    std::string span = strip_leading_heading(std::move(piece));
    if (!span.empty()) spans.push_back(std::move(span));
  }
  return spans;
}

judge::SlotMap segmentation_slots(const ReviewDocument& review) {
  std::string core = review.core_sections_text();
  if (text::trim(core).empty())
    throw InvalidArgument("review has no core sections (summary/strengths/weaknesses)");
  return {{"raw_review_text", core}};
}

judge::SlotMap classification_slots(const std::vector<std::string>& spans,
                                    const std::string& macro_context) {
  json list = json::array();
  for (std::size_t i = 0; i < spans.size(); ++i)
    list.push_back({{"index", i + 1}, {"text", spans[i]}});
  return {{"macro_context", macro_context}, {"argument_list", list.dump()}};
}

judge::SlotMap grounding_slots(const std::vector<ArgumentUnit>& units,
                               const std::string& macro_context) {
  json list = json::array();
  std::size_t k = 0;
  for (const auto& u : units)
    if (u.role == vocab::Role::Premise)
      list.push_back({{"index", ++k}, {"text", u.text}});
  return {{"macro_context", macro_context}, {"premise_list", list.dump()}};
}

std::vector<std::string> segment_adus(const judge::JudgeClient& client,
                                      const ReviewDocument& review) {
  judge::SlotMap slots = segmentation_slots(review);
  judge::JudgeResponse res =
      client.invoke(judge::Phase::DoaSegmentation, slots);
  return split_marked_text(res.parsed.get<std::string>(),
                           slots.at("raw_review_text"));
}

std::vector<ArgumentUnit> classify_adus(const judge::JudgeClient& client,
                                        const std::vector<std::string>& spans,
                                        const std::string& macro_context) {
  if (spans.empty()) throw InvalidArgument("no spans to classify");
  judge::JudgeRequest request{judge::Phase::DoaClassification,
                              classification_slots(spans, macro_context),
                              client.decode_params()};
  judge::JudgeResponse res = client.invoke(request);
  if (res.parsed.at("units").size() != spans.size() &&
      client.mode() == judge::CacheMode::Record) {
    // One bounded re-ask past the cache; deterministic decoding makes more
    // attempts futile.
    res = client.invoke(request, {.bypass_cache = true});
  }
  const json& units_json = res.parsed.at("units");
  if (units_json.size() != spans.size())
    throw SchemaViolation("units",
                          "length mismatch: " + std::to_string(units_json.size()) +
                              " classifications for " +
                              std::to_string(spans.size()) + " spans",
                          res.raw_text);

  std::vector<ArgumentUnit> units;
  units.reserve(spans.size());
  for (std::size_t i = 0; i < spans.size(); ++i) {
    const json& u = units_json[i];
    if (u.at("index").get<std::size_t>() != i + 1)
      throw SchemaViolation("units[" + std::to_string(i) + "].index",
                            "expected " + std::to_string(i + 1), res.raw_text);
    ArgumentUnit unit;
    unit.text = spans[i];
    unit.role = *vocab::parse_role(u.at("role").get<std::string>());
    unit.aspect = *vocab::parse_aspect(u.at("aspect").get<std::string>());
    unit.ordinal = static_cast<int>(i + 1);
    units.push_back(std::move(unit));
  }
  return units;
}

void grade_premises(const judge::JudgeClient& client,
                    std::vector<ArgumentUnit>& units,
                    const std::string& macro_context) {
  std::vector<std::size_t> premise_indices;
  for (std::size_t i = 0; i < units.size(); ++i)
    if (units[i].role == vocab::Role::Premise) premise_indices.push_back(i);
  if (premise_indices.empty()) return;

  judge::JudgeResponse res = client.invoke(judge::Phase::DoaGrounding, grounding_slots(units, macro_context));
  const json& graded = res.parsed.at("premises");
  if (graded.size() != premise_indices.size())
    throw SchemaViolation("premises",
                          "length mismatch: " + std::to_string(graded.size()) +
                              " grades for " +
                              std::to_string(premise_indices.size()) +
                              " premises",
                          res.raw_text);
  for (std::size_t k = 0; k < graded.size(); ++k) {
    if (graded[k].at("index").get<std::size_t>() != k + 1)
      throw SchemaViolation("premises[" + std::to_string(k) + "].index",
                            "expected " + std::to_string(k + 1), res.raw_text);
    units[premise_indices[k]].grounding = graded[k].at("grounding").get<int>();
  }
}

std::optional<DoAResult> compute_doa(const std::vector<ArgumentUnit>& units) {
  if (units.empty()) return std::nullopt;  // un-scoreable, not zero

  DoAResult r;
  r.total_units = units.size();
  double grounding_sum = 0.0;
  for (const auto& u : units) {
    r.aspect_all.counts[static_cast<std::size_t>(u.aspect)]++;
    if (u.role == vocab::Role::Premise) {
      if (!u.grounding)
        throw InvalidArgument("premise without grounding; grade units first");
      ++r.premise_count;
      grounding_sum += static_cast<double>(*u.grounding);
      r.aspect_premises.counts[static_cast<std::size_t>(u.aspect)]++;
    }
  }

  r.premise_ratio =
      static_cast<double>(r.premise_count) / static_cast<double>(r.total_units);
  if (r.premise_count == 0) {
    r.grounding_score = 0.0;
    r.doa = 0.0;  // by definition
    return r;
  }
  r.grounding_score =
      grounding_sum / (2.0 * static_cast<double>(r.premise_count));
  double denom = r.premise_ratio + r.grounding_score;
  r.doa = denom > 0.0 ? 2.0 * r.premise_ratio * r.grounding_score / denom : 0.0;
  return r;
}

std::vector<double> aspect_distribution(const std::vector<ArgumentUnit>& units,
                                        bool premises_only) {
  std::array<std::size_t, 4> counts{};
  std::size_t total = 0;
  for (const auto& u : units) {
    if (premises_only && u.role != vocab::Role::Premise) continue;
    counts[static_cast<std::size_t>(u.aspect)]++;
    ++total;
  }
  if (total == 0) throw InvalidArgument("no qualifying units");
  std::vector<double> dist(4);
  for (std::size_t i = 0; i < 4; ++i)
    dist[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
  return dist;
}

std::optional<DoAResult> run_pipeline(const judge::JudgeClient& client,
                                      const ReviewDocument& review,
                                      std::vector<ArgumentUnit>* units_out) {
  judge::SlotMap seg_slots = segmentation_slots(review);
  const std::string& core = seg_slots.at("raw_review_text");

  std::vector<std::string> spans = segment_adus(client, review);
  if (spans.empty()) return std::nullopt;

  std::vector<ArgumentUnit> units = classify_adus(client, spans, core);
  grade_premises(client, units, core);
  if (units_out != nullptr) *units_out = units;
  return compute_doa(units);
}

}  // namespace revq::doa
