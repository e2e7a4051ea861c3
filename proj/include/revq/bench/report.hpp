#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "revq/bench/pipeline.hpp"

namespace revq::bench {

/// The six headline metrics reported per review.
inline const std::vector<std::string> kHeadlineMetrics = {
    "doa", "ns", "critical_recall", "minor_recall", "ncps", "mcs"};

/// Value of a named metric on a profile; absent when the dimension is absent.
std::optional<double> metric_value(const DimensionProfile& profile,
                                   const std::string& metric);

/// Builds the full report bundle: per-review table, per-venue and macro
/// means +- std, baseline-vs-human Wilcoxon with Holm families (one family =
/// one baseline x one metric across venues), accept-vs-reject Mann-Whitney
/// deltas, the metric Pearson matrix, the aspect JSD/entropy table, and
/// plot-ready series. Cells a test cannot be computed for are marked absent
/// with a reason.
nlohmann::json emit_report(const std::vector<DimensionProfile>& profiles,
                           const RunConfig& config);

/// Writes report.json plus the CSV tables into the directory.
void write_report(const nlohmann::json& report,
                  const std::filesystem::path& dir);

}  // namespace revq::bench
