#include "revq/bench/config.hpp"

#include <algorithm>
#include <fstream>

#include "revq/errors.hpp"

namespace revq::bench {

using nlohmann::json;

bool RunConfig::runs_dimension(const std::string& name) const {
  return std::find(dimensions.begin(), dimensions.end(), name) !=
         dimensions.end();
}

bool RunConfig::concatenate_humans(const std::string& dimension) const {
  auto it = human_bundle_policy.find(dimension);
  if (it == human_bundle_policy.end()) return true;
  if (it->second == "concatenate") return true;
  if (it->second == "per-review") return false;
  throw InvalidArgument("bundle policy must be concatenate|per-review, got '" +
                        it->second + "'");
}

json RunConfig::to_json() const {
  return {
      {"dimensions", dimensions},
      {"judge",
       {{"model", judge_model},
        {"base_url", judge_base_url},
        {"api_key_env", judge_api_key_env},
        {"temperature", temperature},
        {"top_p", top_p}}},
      {"retrieval",
       {{"k", retrieval_k},
        {"mmr_lambda", mmr_lambda},
        {"dedup_threshold", dedup_threshold},
        {"per_query_limit", per_query_limit},
        {"base_url", scholar_base_url},
        {"api_key_env", scholar_api_key_env}}},
      {"aggregation_policy", aggregation_policy},
      {"cache", {{"mode", cache_mode}, {"dir", cache_dir.string()}}},
      {"parallelism", parallelism},
      {"out_dir", out_dir.string()},
      {"human_bundle_policy", human_bundle_policy},
  };
}

RunConfig RunConfig::from_json(const json& doc) {
  RunConfig c;
  if (doc.contains("dimensions"))
    c.dimensions = doc["dimensions"].get<std::vector<std::string>>();
  if (doc.contains("judge")) {
    const json& j = doc["judge"];
    c.judge_model = j.value("model", c.judge_model);
    c.judge_base_url = j.value("base_url", c.judge_base_url);
    c.judge_api_key_env = j.value("api_key_env", c.judge_api_key_env);
    c.temperature = j.value("temperature", c.temperature);
    c.top_p = j.value("top_p", c.top_p);
  }
  if (doc.contains("retrieval")) {
    const json& r = doc["retrieval"];
    c.retrieval_k = r.value("k", c.retrieval_k);
    c.mmr_lambda = r.value("mmr_lambda", c.mmr_lambda);
    c.dedup_threshold = r.value("dedup_threshold", c.dedup_threshold);
    c.per_query_limit = r.value("per_query_limit", c.per_query_limit);
    c.scholar_base_url = r.value("base_url", c.scholar_base_url);
    c.scholar_api_key_env = r.value("api_key_env", c.scholar_api_key_env);
  }
  c.aggregation_policy = doc.value("aggregation_policy", c.aggregation_policy);
  if (doc.contains("cache")) {
    c.cache_mode = doc["cache"].value("mode", c.cache_mode);
    c.cache_dir = doc["cache"].value("dir", c.cache_dir.string());
  }
  c.parallelism = doc.value("parallelism", c.parallelism);
  c.out_dir = std::filesystem::path(doc.value("out_dir", c.out_dir.string()));
  if (doc.contains("human_bundle_policy"))
    for (const auto& [k, v] : doc["human_bundle_policy"].items())
      c.human_bundle_policy[k] = v.get<std::string>();

  for (const auto& d : c.dimensions)
    if (d != "doa" && d != "novelty" && d != "flaw" && d != "mcs")
      throw InvalidArgument("unknown dimension '" + d + "'");
  if (c.parallelism < 1) throw InvalidArgument("parallelism must be >= 1");
  return c;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read config " + path.string());
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded())
    throw InvalidArgument("config is not valid JSON: " + path.string());
  return from_json(doc);
}

}  // namespace revq::bench
