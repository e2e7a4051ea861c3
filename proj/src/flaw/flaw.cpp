#include "revq/flaw/flaw.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <json.hpp>

#include "revq/errors.hpp"
#include "revq/text.hpp"

namespace revq::flaw {

namespace {

using nlohmann::json;

}  // namespace

bool MicroFlaw::contributed_by(const std::string& reviewer_id) const {
  return std::any_of(contributors.begin(), contributors.end(),
                     [&](const FlawContribution& c) {
                       return c.reviewer_id == reviewer_id;
                     });
}

judge::SlotMap atomization_slots(const std::vector<ReviewDocument>& reviews) {
  std::string input;
  for (const auto& r : reviews) {
    std::string body = r.flaw_sections_text();
    if (text::trim(body).empty()) continue;
    if (!input.empty()) input += "\n\n";
    input += "REVIEWER " + r.reviewer_id + " (" + r.reviewer_type + ")\n" + body;
  }
  if (input.empty())
    throw InvalidArgument(
        "no review has summary/weaknesses/questions content");
  return {{"input_text", input}};
}

judge::SlotMap adjudication_slots(const std::vector<MicroFlaw>& flaws,
                                  const std::string& paper_text) {
  json list = json::array();
  for (const auto& f : flaws) {
    json contributors = json::array();
    for (const auto& c : f.contributors)
      contributors.push_back(
          {{"reviewer_id", c.reviewer_id}, {"argument_text", c.argument_text}});
    list.push_back({{"flaw_id", f.flaw_id},
                    {"description", f.description},
                    {"macro_topic", f.macro_topic},
                    {"contributors", contributors}});
  }
  return {{"paper_text", paper_text},
          {"micro_flaws_json", json{{"micro_flaws", list}}.dump()}};
}

std::vector<MicroFlaw> atomize_flaws(const judge::JudgeClient& client,
                                     const std::vector<ReviewDocument>& reviews) {
  judge::JudgeResponse res =
      client.invoke(judge::Phase::FlawAtomization, atomization_slots(reviews));

  std::vector<MicroFlaw> flaws;
  for (const auto& f : res.parsed.at("micro_flaws")) {
    MicroFlaw flaw;
    flaw.flaw_id = f.at("flaw_id").get<std::string>();
    flaw.description = f.at("description").get<std::string>();
    flaw.macro_topic = f.at("macro_topic").get<std::string>();
    for (const auto& c : f.at("contributors"))
      flaw.contributors.push_back({c.at("reviewer_id").get<std::string>(),
                                   c.at("argument_text").get<std::string>()});
    flaws.push_back(std::move(flaw));
  }
  return flaws;
}

std::vector<MicroFlaw> adjudicate_flaws(const judge::JudgeClient& client,
                                        std::vector<MicroFlaw> flaws,
                                        const std::string& paper_text) {
  if (flaws.empty()) return flaws;
  judge::JudgeResponse res = client.invoke(judge::Phase::FlawAdjudication, adjudication_slots(flaws, paper_text));

  std::map<std::string, const json*> verdicts;
  for (const auto& v : res.parsed.at("verdicts"))
    verdicts[v.at("flaw_id").get<std::string>()] = &v;

  for (auto& flaw : flaws) {
    auto it = verdicts.find(flaw.flaw_id);
    if (it == verdicts.end())
      throw SchemaViolation("verdicts", "no verdict for flaw " + flaw.flaw_id,
                            res.raw_text);
    const json& v = *it->second;
    flaw.is_valid = v.at("is_valid").get<bool>();
    if (*flaw.is_valid)
      flaw.severity = vocab::parse_severity(v.at("severity").get<std::string>());
    else
      flaw.severity.reset();  // hallucinations carry no severity
  }
  return flaws;
}

RankedFlawList recover_positions(const ReviewDocument& review,
                                 const std::vector<MicroFlaw>& attributed,
                                 SeverityWeights weights) {
  RankedFlawList ranked;
  ranked.reviewer_id = review.reviewer_id;
  const std::string haystack = review.full_text();

  struct Located {
    std::size_t offset;
    std::string flaw_id;
    int weight;
  };
  std::vector<Located> located;

  for (const auto& flaw : attributed) {
    if (!flaw.is_valid.value_or(false)) continue;
    std::optional<std::size_t> best;
    for (const auto& c : flaw.contributors) {
      if (c.reviewer_id != review.reviewer_id) continue;
      auto pos = text::find_normalized(haystack, c.argument_text);
      if (pos && (!best || *pos < *best)) best = pos;
    }
    if (!best) {
      ranked.unlocatable_flaw_ids.push_back(flaw.flaw_id);
      continue;
    }
    located.push_back({*best, flaw.flaw_id, weights.of(*flaw.severity)});
  }

  std::stable_sort(located.begin(), located.end(),
                   [](const Located& a, const Located& b) {
                     if (a.offset != b.offset) return a.offset < b.offset;
                     return a.flaw_id < b.flaw_id;
                   });
  int position = 0;
  for (const auto& l : located)
    ranked.entries.push_back({l.flaw_id, ++position, l.weight});
  return ranked;
}

std::pair<std::optional<double>, std::optional<double>> compute_recall(
    const std::vector<MicroFlaw>& consensus,
    const std::set<std::string>& reviewer_flaw_ids) {
  std::size_t total_critical = 0, total_minor = 0;
  std::size_t hit_critical = 0, hit_minor = 0;
  for (const auto& flaw : consensus) {
    if (!flaw.is_valid.value_or(false)) continue;
    bool hit = reviewer_flaw_ids.count(flaw.flaw_id) > 0;
    if (flaw.severity == vocab::Severity::Critical) {
      ++total_critical;
      if (hit) ++hit_critical;
    } else {
      ++total_minor;
      if (hit) ++hit_minor;
    }
  }
  std::optional<double> critical, minor;
  if (total_critical > 0)
    critical = static_cast<double>(hit_critical) /
               static_cast<double>(total_critical);
  if (total_minor > 0)
    minor = static_cast<double>(hit_minor) / static_cast<double>(total_minor);
  return {critical, minor};
}

std::optional<double> compute_ncps(const RankedFlawList& ranked) {
  if (ranked.entries.empty()) return std::nullopt;

  double cps = 0.0;
  std::vector<int> weights;
  for (const auto& e : ranked.entries) {
    cps += static_cast<double>(e.weight) /
           std::log2(static_cast<double>(e.position) + 1.0);
    weights.push_back(e.weight);
  }
  std::sort(weights.begin(), weights.end(), std::greater<>());
  double icps = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i)
    icps += static_cast<double>(weights[i]) /
            std::log2(static_cast<double>(i + 1) + 1.0);
  return cps / icps;
}

FlawScores score_reviewer(const ReviewDocument& review,
                          const std::vector<MicroFlaw>& adjudicated,
                          SeverityWeights weights) {
  FlawScores scores;
  std::set<std::string> contributed_ids;
  std::vector<MicroFlaw> attributed;
  for (const auto& flaw : adjudicated) {
    if (!flaw.contributed_by(review.reviewer_id)) continue;
    ++scores.extracted;
    contributed_ids.insert(flaw.flaw_id);
    attributed.push_back(flaw);
    if (flaw.is_valid.value_or(false)) {
      if (flaw.severity == vocab::Severity::Critical)
        ++scores.valid_critical;
      else
        ++scores.valid_minor;
    } else {
      ++scores.hallucinated;
    }
  }

  auto [critical, minor] = compute_recall(adjudicated, contributed_ids);
  scores.critical_recall = critical;
  scores.minor_recall = minor;
  scores.ncps = compute_ncps(recover_positions(review, attributed, weights));
  return scores;
}

}  // namespace revq::flaw
