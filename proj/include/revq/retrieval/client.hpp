#pragma once

#include <chrono>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "revq/judge/client.hpp"  // ReplayStore, CacheMode
#include "revq/retrieval/pool.hpp"

namespace revq::retrieval {

/// Minimum spacing between outgoing requests, shared by all threads.
class RateLimiter {
 public:
  explicit RateLimiter(std::chrono::milliseconds min_interval)
      : min_interval_(min_interval) {}
  void acquire();

 private:
  std::chrono::milliseconds min_interval_;
  std::mutex mutex_;
  std::chrono::steady_clock::time_point last_{};
};

/// Raw search transport; tests substitute a canned implementation.
class SearchTransport {
 public:
  virtual ~SearchTransport() = default;
  /// Returns the response body of one paper-search call.
  virtual std::string search(const SearchQuery& query) = 0;
};

struct ScholarConfig {
  std::string base_url = "https://api.semanticscholar.org";
  std::string api_key_env = "REVQ_S2_API_KEY";
  std::chrono::milliseconds min_request_interval{1100};
  std::chrono::seconds timeout{60};
};

std::unique_ptr<SearchTransport> make_scholar_transport(ScholarConfig config);

/// Scholarly-search client with a disk cache keyed by query text so retrieval
/// is replayable offline. Uses the same cache file layout as the judge store.
class ScholarClient {
 public:
  ScholarClient(std::shared_ptr<SearchTransport> transport,
                std::shared_ptr<judge::ReplayStore> cache,
                judge::CacheMode mode,
                std::shared_ptr<judge::DigestTrace> trace = nullptr);

  /// Runs one query (through the cache policy) and parses the candidates.
  /// Relevance: the API's result score when provided, else reciprocal rank.
  std::vector<CandidateWork> search(const SearchQuery& query);

  /// Issues all queries, merges by id keeping max relevance.
  std::vector<CandidateWork> search_all(const std::vector<SearchQuery>& queries);

  static std::string query_digest(const SearchQuery& query);

  /// Parses a paper-search response body into candidates.
  static std::vector<CandidateWork> parse_response(const std::string& body);

 private:
  std::shared_ptr<SearchTransport> transport_;
  std::shared_ptr<judge::ReplayStore> cache_;
  judge::CacheMode mode_;
  std::shared_ptr<judge::DigestTrace> trace_;
};

}  // namespace revq::retrieval
