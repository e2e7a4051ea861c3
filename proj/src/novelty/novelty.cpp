#include "revq/novelty/novelty.hpp"

#include <algorithm>
#include <cmath>
#include <regex>

#include <json.hpp>

#include "revq/errors.hpp"
#include "revq/retrieval/pool.hpp"
#include "revq/text.hpp"

namespace revq::novelty {

namespace {

using nlohmann::json;

constexpr double kStrictSupportTolerance = 1e-9;

}  // namespace

retrieval::ExtractionAnchors NoveltyExtraction::anchors() const {
  retrieval::ExtractionAnchors a;
  a.core_task = core_task;
  for (const auto& c : contributions) a.contribution_names.push_back(c.name);
  return a;
}

AggregationPolicy aggregation_policy_from_name(std::string_view name) {
  if (name == "top3-weighted") return AggregationPolicy::Top3Weighted;
  if (name == "max") return AggregationPolicy::Max;
  throw InvalidArgument("unknown aggregation policy: " + std::string(name));
}

std::string_view aggregation_policy_name(AggregationPolicy policy) {
  return policy == AggregationPolicy::Top3Weighted ? "top3-weighted" : "max";
}

std::vector<std::string> extract_citation_strings(const std::string& review_text) {
  static const std::regex patterns[] = {
      // Author-year: "Smith et al. (2023)", "Smith and Jones, 2021", "(Li, 2020)"
      std::regex(R"(\b[A-Z][A-Za-z\-']+(?:\s+(?:et\s+al\.?|and\s+[A-Z][A-Za-z\-']+))?,?\s*\(?(?:19|20)\d{2}[a-z]?\)?)"),
      // arXiv identifiers
      std::regex(R"(arXiv:\d{4}\.\d{4,5}(?:v\d+)?)", std::regex::icase),
      // URLs
      std::regex(R"(https?://[^\s\)\]]+)"),
      // Bracketed numeric citations [12] or [3,4]
      std::regex(R"(\[\d+(?:\s*,\s*\d+)*\])"),
  };

  std::vector<std::string> out;
  for (const auto& re : patterns) {
    auto begin = std::sregex_iterator(review_text.begin(), review_text.end(), re);
    for (auto it = begin; it != std::sregex_iterator(); ++it) {
      std::string hit = text::normalize_ws(it->str());
      if (std::find(out.begin(), out.end(), hit) == out.end())
        out.push_back(std::move(hit));
    }
  }
  return out;
}

judge::SlotMap extraction_slots(const std::string& paper_text,
                                const std::string& review_text) {
  return {{"paper_text", paper_text}, {"review_text", review_text}};
}

judge::SlotMap verdict_slots(const std::string& claim_text,
                             const std::string& paper_context,
                             const retrieval::CandidateWork& candidate) {
  return {{"review_sentence", claim_text},
          {"paper_abstract_intro", paper_context},
          {"related_work_title_abstract",
           "TITLE: " + candidate.title + "\nABSTRACT: " + candidate.abstract}};
}

NoveltyExtraction extract_targets(const judge::JudgeClient& client,
                                  const std::string& paper_text,
                                  const ReviewDocument& review) {
  const std::string review_text = review.full_text();
  if (text::trim(paper_text).empty() || text::trim(review_text).empty())
    throw InvalidArgument("paper and review texts must be non-empty");

  judge::JudgeResponse res = client.invoke(judge::Phase::NoveltyExtraction, extraction_slots(paper_text, review_text));
  const json& doc = res.parsed;

  NoveltyExtraction ex;
  const json& paper = doc.at("paper");
  ex.core_task = paper.at("core_task").get<std::string>();
  for (const auto& c : paper.value("contributions", json::array())) {
    Contribution contrib;
    contrib.name = c.at("name").get<std::string>();
    contrib.author_claim_text = c.value("author_claim_text", "");
    contrib.description = c.value("description", "");
    contrib.source_hint = c.value("source_hint", "");
    ex.contributions.push_back(std::move(contrib));
  }
  for (const auto& t : paper.value("key_terms", json::array()))
    ex.key_terms.push_back(t.get<std::string>());
  for (const auto& t : paper.value("must_have_entities", json::array()))
    ex.must_have_entities.push_back(t.get<std::string>());

  const json& rev = doc.at("review");
  for (const auto& c : rev.at("novelty_claims")) {
    NoveltyClaim claim;
    claim.claim_id = c.at("claim_id").get<std::string>();
    claim.text = c.at("text").get<std::string>();
    claim.stance = *vocab::parse_stance(c.at("stance").get<std::string>());
    claim.confidence_lang = c.value("confidence_lang", "");
    for (const auto& s : c.value("prior_work_strings", json::array()))
      claim.prior_work_strings.push_back(s.get<std::string>());
    // Verbatim containment contract: claims the judge did not copy from the
    // review are dropped rather than verified.
    if (!text::contains_normalized(review_text, claim.text)) {
      ex.dropped_claim_ids.push_back(claim.claim_id);
      continue;
    }
    ex.claims.push_back(std::move(claim));
  }
  for (const auto& s : rev.value("all_citations_raw", json::array()))
    ex.all_citations_raw.push_back(s.get<std::string>());

  // Regex fallback independently augments the citation list.
  for (auto& hit : extract_citation_strings(review_text))
    if (std::find(ex.all_citations_raw.begin(), ex.all_citations_raw.end(), hit) ==
        ex.all_citations_raw.end())
      ex.all_citations_raw.push_back(std::move(hit));

  return ex;
}

PairVerdict verify_pair(const judge::JudgeClient& client,
                        const NoveltyClaim& claim,
                        const retrieval::CandidateWork& candidate,
                        const std::string& paper_context) {
  if (text::trim(candidate.title).empty() || text::trim(candidate.abstract).empty())
    throw InvalidArgument("candidate must have a non-empty title and abstract");

  judge::JudgeResponse res = client.invoke(judge::Phase::NoveltyVerdict, verdict_slots(claim.text, paper_context, candidate));
  const json& doc = res.parsed;

  PairVerdict v;
  v.claim_id = claim.claim_id;
  v.candidate_id = candidate.id;
  v.score = doc.at("score").get<int>();
  v.label = *vocab::parse_verdict_label(doc.at("label").get<std::string>());
  v.stance_alignment = doc.value("stance_alignment", "");
  v.calibration = doc.value("calibration", "");
  v.explanation = doc.value("explanation", "");
  return v;
}

double aggregate_claim(const std::vector<PairVerdict>& verdicts,
                       const std::map<std::string, double>& relevances,
                       AggregationPolicy policy) {
  if (verdicts.empty()) throw InvalidArgument("no verdicts to aggregate");

  if (policy == AggregationPolicy::Max) {
    int best = verdicts.front().score;
    for (const auto& v : verdicts) best = std::max(best, v.score);
    return static_cast<double>(best);
  }

  auto relevance_of = [&](const PairVerdict& v) {
    auto it = relevances.find(v.candidate_id);
    return it == relevances.end() ? 0.0 : it->second;
  };

  bool all_zero = std::all_of(verdicts.begin(), verdicts.end(), [&](const auto& v) {
    return relevance_of(v) == 0.0;
  });

  std::vector<std::size_t> order(verdicts.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  if (!all_zero) {
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
      double ri = relevance_of(verdicts[i]), rj = relevance_of(verdicts[j]);
      if (ri != rj) return ri > rj;
      return verdicts[i].candidate_id < verdicts[j].candidate_id;
    });
  }
  const std::size_t take = std::min<std::size_t>(3, order.size());

  if (all_zero) {
    // Degenerate relevance: unweighted mean of the first three in input order.
    double sum = 0.0;
    for (std::size_t i = 0; i < take; ++i) sum += verdicts[order[i]].score;
    return sum / static_cast<double>(take);
  }

  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < take; ++i) {
    const PairVerdict& v = verdicts[order[i]];
    double r = relevance_of(v);
    num += static_cast<double>(v.score) * r;
    den += r;
  }
  if (den == 0.0) {
    double sum = 0.0;
    for (std::size_t i = 0; i < take; ++i) sum += verdicts[order[i]].score;
    return sum / static_cast<double>(take);
  }
  return num / den;
}

std::optional<NoveltyResult> compute_novelty_metrics(
    const std::vector<double>& per_claim) {
  if (per_claim.empty()) return std::nullopt;

  NoveltyResult r;
  r.per_claim_scores = per_claim;
  const double n = static_cast<double>(per_claim.size());
  double sum = 0.0;
  std::size_t supported = 0, strict = 0;
  for (double s : per_claim) {
    sum += s;
    if (s >= 1.0) ++supported;
    if (std::fabs(s - 2.0) <= kStrictSupportTolerance) ++strict;
  }
  r.mean_raw = sum / n;
  r.ns = (r.mean_raw + 2.0) / 4.0;
  r.sr = static_cast<double>(supported) / n;
  r.ssr = static_cast<double>(strict) / n;
  r.claims_per_review = n;
  return r;
}

std::vector<double> stance_distribution(const std::vector<NoveltyClaim>& claims) {
  if (claims.empty()) throw InvalidArgument("no claims");
  std::vector<double> dist(4, 0.0);
  for (const auto& c : claims) dist[static_cast<std::size_t>(c.stance)] += 1.0;
  for (double& d : dist) d /= static_cast<double>(claims.size());
  return dist;
}

std::optional<NoveltyResult> run_pipeline(const judge::JudgeClient& judge_client,
                                          retrieval::ScholarClient& scholar,
                                          const ReviewDocument& review,
                                          const PipelineInputs& inputs,
                                          PipelineArtifacts* artifacts) {
  NoveltyExtraction ex =
      extract_targets(judge_client, inputs.paper_text, review);
  if (artifacts != nullptr) artifacts->extraction = ex;
  if (ex.claims.empty()) return std::nullopt;

  auto queries = retrieval::build_queries(ex.anchors(), inputs.per_query_limit);
  auto merged = scholar.search_all(queries);
  auto filtered = retrieval::filter_candidates(merged, inputs.submission_year);
  auto deduped = retrieval::dedup_candidates(filtered, inputs.dedup_threshold);
  auto pool = retrieval::mmr_select(deduped, inputs.mmr_k, inputs.mmr_lambda);
  if (artifacts != nullptr) artifacts->pool = pool;
  if (pool.empty()) return std::nullopt;

  std::map<std::string, double> relevances;
  for (const auto& c : pool) relevances[c.id] = c.relevance;

  std::vector<double> per_claim;
  for (const auto& claim : ex.claims) {
    std::vector<PairVerdict> verdicts;
    for (const auto& candidate : pool) {
      PairVerdict v =
          verify_pair(judge_client, claim, candidate, inputs.paper_context);
      if (artifacts != nullptr) artifacts->verdicts.push_back(v);
      verdicts.push_back(std::move(v));
    }
    per_claim.push_back(aggregate_claim(verdicts, relevances, inputs.policy));
  }

  auto result = compute_novelty_metrics(per_claim);
  if (result && review.review_count > 0)
    result->claims_per_review = static_cast<double>(ex.claims.size()) /
                                static_cast<double>(review.review_count);
  return result;
}

}  // namespace revq::novelty
