#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace revq::bench {

/// Every field has a documented default; the whole config is serialized into
/// the run manifest.
struct RunConfig {
  /// Dimensions to run: any of doa, novelty, flaw, mcs.
  std::vector<std::string> dimensions{"doa", "novelty", "flaw", "mcs"};

  // Judge backend (pinned evaluation decode).
  std::string judge_model = "gemini-2.5-flash-lite";
  std::string judge_base_url = "https://generativelanguage.googleapis.com";
  std::string judge_api_key_env = "REVQ_JUDGE_API_KEY";
  double temperature = 0.0;
  double top_p = 0.95;

  // Retrieval.
  std::size_t retrieval_k = 30;
  double mmr_lambda = 0.5;
  double dedup_threshold = 0.96;
  int per_query_limit = 20;
  std::string scholar_base_url = "https://api.semanticscholar.org";
  std::string scholar_api_key_env = "REVQ_S2_API_KEY";

  /// Per-claim aggregation: top3-weighted (default) | max (ablation).
  std::string aggregation_policy = "top3-weighted";

  // Cache.
  std::string cache_mode = "record";  // record | replay | passthrough
  std::filesystem::path cache_dir = "cache";

  /// Bounded concurrent granules (judge calls share this pool).
  int parallelism = 4;

  std::filesystem::path out_dir = "out";

  /// Treatment of multi-review human bundles per dimension:
  /// concatenate | per-review.
  std::map<std::string, std::string> human_bundle_policy{
      {"doa", "concatenate"},
      {"novelty", "concatenate"},
      {"flaw", "concatenate"},
      {"mcs", "concatenate"},
  };

  bool runs_dimension(const std::string& name) const;
  bool concatenate_humans(const std::string& dimension) const;

  nlohmann::json to_json() const;
  static RunConfig from_json(const nlohmann::json& doc);
  static RunConfig load(const std::filesystem::path& path);
};

}  // namespace revq::bench
