#include "revq/retrieval/pool.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>

#include "revq/errors.hpp"
#include "revq/text.hpp"

namespace revq::retrieval {

namespace {

// Title markers for non-technical documents, used when the API supplies no
// publication-type field.
const char* kNonTechnicalTitleMarkers[] = {
    "editorial", "erratum", "errata", "corrigendum", "retraction",
    "comment on", "reply to", "book review", "table of contents",
};

const char* kNonTechnicalTypes[] = {
    "Editorial", "LettersAndComments", "News",
};

bool is_non_technical(const CandidateWork& c) {
  if (!c.publication_types.empty()) {
    for (const auto& t : c.publication_types)
      for (const char* bad : kNonTechnicalTypes)
        if (t == bad) return true;
    return false;
  }
  const std::string title = text::to_lower(c.title);
  for (const char* marker : kNonTechnicalTitleMarkers)
    if (title.find(marker) != std::string::npos) return true;
  return false;
}

std::vector<std::size_t> relevance_order(const std::vector<CandidateWork>& pool) {
  std::vector<std::size_t> order(pool.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    if (pool[i].relevance != pool[j].relevance)
      return pool[i].relevance > pool[j].relevance;
    return pool[i].id < pool[j].id;
  });
  return order;
}

}  // namespace

std::vector<SearchQuery> build_queries(const ExtractionAnchors& anchors,
                                       int per_query_limit) {
  if (text::trim(anchors.core_task).empty())
    throw InvalidArgument("extraction has no core task");
  std::vector<SearchQuery> queries;
  queries.push_back({.text = text::normalize_ws(anchors.core_task),
                     .limit = per_query_limit});
  for (const auto& name : anchors.contribution_names) {
    std::string t = text::normalize_ws(name);
    if (t.empty()) continue;
    queries.push_back({.text = std::move(t), .limit = per_query_limit});
  }
  return queries;
}

std::vector<CandidateWork> filter_candidates(
    const std::vector<CandidateWork>& raw, int submission_year) {
  std::vector<CandidateWork> out;
  out.reserve(raw.size());
  for (const auto& c : raw) {
    if (c.year > submission_year) continue;
    if (text::trim(c.abstract).empty()) continue;
    if (is_non_technical(c)) continue;
    out.push_back(c);
  }
  return out;
}

double candidate_similarity(const CandidateWork& a, const CandidateWork& b) {
  return text::trigram_cosine(a.title + " " + a.abstract,
                              b.title + " " + b.abstract);
}

std::vector<CandidateWork> dedup_candidates(
    const std::vector<CandidateWork>& pool, double threshold) {
  std::vector<CandidateWork> retained;
  for (std::size_t i : relevance_order(pool)) {
    bool duplicate = false;
    for (const auto& kept : retained) {
      if (candidate_similarity(pool[i], kept) >= threshold) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) retained.push_back(pool[i]);
  }
  return retained;
}

std::vector<CandidateWork> mmr_select(const std::vector<CandidateWork>& pool,
                                      std::size_t k, double lambda) {
  std::vector<std::size_t> remaining = relevance_order(pool);
  std::vector<CandidateWork> selected;
  selected.reserve(std::min(k, pool.size()));

  while (!remaining.empty() && selected.size() < k) {
    std::size_t best_pos = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t pos = 0; pos < remaining.size(); ++pos) {
      const CandidateWork& c = pool[remaining[pos]];
      double max_sim = 0.0;
      for (const auto& s : selected)
        max_sim = std::max(max_sim, candidate_similarity(c, s));
      double score = lambda * c.relevance - (1.0 - lambda) * max_sim;
      // remaining is already in (relevance desc, id asc) order, so strict
      // improvement keeps the tie-break rule.
      if (score > best_score) {
        best_score = score;
        best_pos = pos;
      }
    }
    selected.push_back(pool[remaining[best_pos]]);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best_pos));
  }
  return selected;
}

std::vector<CandidateWork> merge_by_id(
    const std::vector<std::vector<CandidateWork>>& per_query) {
  std::vector<CandidateWork> merged;
  std::unordered_map<std::string, std::size_t> index;
  for (const auto& results : per_query) {
    for (const auto& c : results) {
      auto it = index.find(c.id);
      if (it == index.end()) {
        index.emplace(c.id, merged.size());
        merged.push_back(c);
      } else if (c.relevance > merged[it->second].relevance) {
        merged[it->second].relevance = c.relevance;
      }
    }
  }
  return merged;
}

}  // namespace revq::retrieval
