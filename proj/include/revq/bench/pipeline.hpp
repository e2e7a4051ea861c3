#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "revq/arc/arc.hpp"
#include "revq/bench/config.hpp"
#include "revq/bench/corpus.hpp"
#include "revq/doa/doa.hpp"
#include "revq/flaw/flaw.hpp"
#include "revq/judge/client.hpp"
#include "revq/novelty/novelty.hpp"
#include "revq/retrieval/client.hpp"

namespace revq::bench {

/// The per-review score vector across the four dimensions. Absent components
/// stay absent; they are never zero-filled.
struct DimensionProfile {
  std::string paper_id;
  std::string reviewer_id;
  std::string reviewer_type;
  std::string venue;
  int year = 0;
  std::string decision;

  std::optional<doa::DoAResult> doa;
  std::optional<novelty::NoveltyResult> novelty;
  std::optional<flaw::FlawScores> flaws;
  std::optional<arc::ConstructivenessResult> mcs;

  /// Per-dimension failure reasons; a key present here means the granule ran
  /// and failed (distinct from a dimension that was not requested).
  std::map<std::string, std::string> errors;

  std::string backend_id;
  std::vector<std::string> cache_digests;
  /// Seconds since epoch; absent in replay mode so result files are
  /// byte-stable.
  std::optional<long> generated_at;
};

nlohmann::json profile_to_json(const DimensionProfile& profile);
DimensionProfile profile_from_json(const nlohmann::json& doc);

/// Injectable backends; tests substitute deterministic stubs.
struct Clients {
  std::shared_ptr<judge::JudgeBackend> judge_backend;
  std::shared_ptr<judge::ReplayStore> judge_store;
  std::shared_ptr<retrieval::SearchTransport> scholar_transport;
  std::shared_ptr<judge::ReplayStore> scholar_store;
};

/// HTTP backends plus disk stores under config.cache_dir/{judge,scholar}.
Clients make_default_clients(const RunConfig& config);

struct RunUsage {
  long backend_calls = 0;
  long cache_hits = 0;
  long prompt_bytes = 0;
  long response_bytes = 0;
};

/// Runs the requested dimension pipelines for every (paper, reviewer) pair
/// under a bounded worker pool. Failures isolate to their granule; results
/// are independent of scheduling order.
std::vector<DimensionProfile> run_pipelines(
    const std::vector<CorpusEntry>& corpus, const RunConfig& config,
    const Clients& clients, RunUsage* usage = nullptr);

/// One JSON file per (paper, reviewer), write-then-rename.
void write_profiles(const std::vector<DimensionProfile>& profiles,
                    const std::filesystem::path& dir);

std::vector<DimensionProfile> load_profiles(const std::filesystem::path& dir);

/// Run manifest: config plus the digests of every cache entry consumed.
nlohmann::json make_manifest(const RunConfig& config,
                             const std::vector<DimensionProfile>& profiles);

}  // namespace revq::bench
