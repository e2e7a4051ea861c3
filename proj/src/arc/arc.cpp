#include "revq/arc/arc.hpp"

#include <algorithm>
#include <map>

#include <json.hpp>

#include "revq/errors.hpp"
#include "revq/text.hpp"

namespace revq::arc {

namespace {

using nlohmann::json;

}  // namespace

double AtomicComment::clc() const {
  if (!d_scores) throw InvalidArgument("ARC " + arc_id + " is unscored");
  int sum = 0;
  for (int d : *d_scores) sum += d;
  return static_cast<double>(sum) / 10.0;
}

judge::SlotMap extraction_slots(const ReviewDocument& review) {
  std::string body = review.full_text();
  if (text::trim(body).empty()) throw InvalidArgument("review is empty");
  return {{"raw_review_text", body}};
}

judge::SlotMap scoring_slots(const std::vector<AtomicComment>& arcs,
                             const std::string& macro_context) {
  json list = json::array();
  for (const auto& a : arcs)
    list.push_back({{"arc_id", a.arc_id},
                    {"text", a.text},
                    {"anchor_quote", a.anchor_quote},
                    {"comment_type", std::string(vocab::name_of(a.comment_type))}});
  return {{"raw_review_text", macro_context}, {"arc_json_list", list.dump()}};
}

std::vector<AtomicComment> extract_arcs(const judge::JudgeClient& client,
                                        const ReviewDocument& review,
                                        std::vector<std::string>* dropped_arc_ids) {
  judge::SlotMap slots = extraction_slots(review);
  const std::string& review_text = slots.at("raw_review_text");
  judge::JudgeResponse res =
      client.invoke(judge::Phase::ArcExtraction, slots);

  std::vector<AtomicComment> arcs;
  for (const auto& a : res.parsed.at("arcs")) {
    AtomicComment c;
    c.arc_id = a.at("arc_id").get<std::string>();
    c.text = a.at("text").get<std::string>();
    c.anchor_quote = a.at("anchor_quote").get<std::string>();
    c.comment_type =
        *vocab::parse_comment_type(a.at("comment_type").get<std::string>());
    // A fabricated anchor says nothing about the review; drop rather than
    // score.
    if (!text::contains_normalized(review_text, c.anchor_quote)) {
      if (dropped_arc_ids != nullptr) dropped_arc_ids->push_back(c.arc_id);
      continue;
    }
    arcs.push_back(std::move(c));
  }
  return arcs;
}

std::vector<AtomicComment> score_arcs(const judge::JudgeClient& client,
                                      std::vector<AtomicComment> arcs,
                                      const std::string& macro_context) {
  if (arcs.empty()) return arcs;
  judge::JudgeResponse res = client.invoke(judge::Phase::ArcScoring, scoring_slots(arcs, macro_context));

  std::map<std::string, std::array<int, 5>> scores;
  for (const auto& s : res.parsed.at("scores"))
    scores[s.at("arc_id").get<std::string>()] = {
        s.at("D1").get<int>(), s.at("D2").get<int>(), s.at("D3").get<int>(),
        s.at("D4").get<int>(), s.at("D5").get<int>()};

  for (auto& a : arcs) {
    auto it = scores.find(a.arc_id);
    if (it == scores.end())
      throw SchemaViolation("scores", "no scores for ARC " + a.arc_id,
                            res.raw_text);
    a.d_scores = it->second;
  }
  return arcs;
}

std::optional<ConstructivenessResult> compute_mcs(
    const std::vector<AtomicComment>& arcs) {
  if (arcs.empty()) return std::nullopt;

  ConstructivenessResult r;
  const double n = static_cast<double>(arcs.size());
  for (const auto& a : arcs) {
    if (!a.d_scores) throw InvalidArgument("ARC " + a.arc_id + " is unscored");
    double clc = a.clc();
    r.per_arc_clc.push_back(clc);
    r.mcs += clc;
    for (std::size_t k = 0; k < 5; ++k)
      r.dim_means[k] += static_cast<double>((*a.d_scores)[k]);
    if ((*a.d_scores)[0] >= 1) r.ar += 1.0;
    if ((*a.d_scores)[3] == 2) r.sd += 1.0;
    if (clc >= 0.5) r.cd += 1.0;
  }
  r.mcs /= n;
  for (double& m : r.dim_means) m /= n;
  r.ar /= n;
  r.sd /= n;
  r.cd /= n;
  return r;
}

std::optional<ConstructivenessResult> run_pipeline(
    const judge::JudgeClient& client, const ReviewDocument& review,
    std::vector<AtomicComment>* arcs_out) {
  std::vector<AtomicComment> arcs = extract_arcs(client, review);
  if (arcs.empty()) return std::nullopt;
  arcs = score_arcs(client, arcs, review.full_text());
  if (arcs_out != nullptr) *arcs_out = arcs;
  return compute_mcs(arcs);
}

}  // namespace revq::arc
