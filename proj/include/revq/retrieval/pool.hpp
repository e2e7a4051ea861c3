#pragma once

#include <string>
#include <vector>

namespace revq::retrieval {

struct SearchQuery {
  std::string text;
  int limit = 20;
  // Fields requested from the search API.
  std::vector<std::string> fields{"title", "abstract", "year",
                                  "publicationTypes", "externalIds"};

  bool operator==(const SearchQuery&) const = default;
};

/// One retrieved prior-work record.
struct CandidateWork {
  std::string id;
  std::string title;
  std::string abstract;
  int year = 0;
  double relevance = 0.0;  // retrieval score r_j
  std::vector<std::string> publication_types;

  bool operator==(const CandidateWork&) const = default;
};

/// Anchors extracted from the paper under review; query composition is a pure
/// function of this record.
struct ExtractionAnchors {
  std::string core_task;
  std::vector<std::string> contribution_names;
};

/// One query from the core task plus one per contribution, in that order.
std::vector<SearchQuery> build_queries(const ExtractionAnchors& anchors,
                                       int per_query_limit = 20);

/// Drops candidates published after the submission year, non-technical
/// documents (editorials, errata and the like), and entries with an empty
/// abstract.
std::vector<CandidateWork> filter_candidates(
    const std::vector<CandidateWork>& raw, int submission_year);

/// Near-duplicate removal: greedy scan in relevance-descending order, dropping
/// a candidate whose title+abstract trigram cosine to any retained candidate
/// is >= threshold.
std::vector<CandidateWork> dedup_candidates(
    const std::vector<CandidateWork>& pool, double threshold = 0.96);

/// Greedy maximal-marginal-relevance selection of up to k candidates.
/// Score of a remaining candidate: lambda * relevance - (1 - lambda) *
/// max-similarity-to-selected. Ties broken by (relevance desc, id asc).
std::vector<CandidateWork> mmr_select(const std::vector<CandidateWork>& pool,
                                      std::size_t k, double lambda = 0.5);

/// Similarity used by dedup and MMR.
double candidate_similarity(const CandidateWork& a, const CandidateWork& b);

/// Merges results of several queries by id, keeping the maximum relevance
/// for duplicates. Stable order: first appearance.
std::vector<CandidateWork> merge_by_id(
    const std::vector<std::vector<CandidateWork>>& per_query);

}  // namespace revq::retrieval
