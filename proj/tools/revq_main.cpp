#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "revq/bench/config.hpp"
#include "revq/errors.hpp"
#include "revq/bench/corpus.hpp"
#include "revq/bench/pipeline.hpp"
#include "revq/bench/report.hpp"
#include "revq/stats/stats.hpp"

namespace {

using nlohmann::json;

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t comma = s.find(',', pos);
    std::string piece =
        comma == std::string::npos ? s.substr(pos) : s.substr(pos, comma - pos);
    if (!piece.empty()) out.push_back(piece);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

int cmd_run(const std::string& corpus_dir, const std::string& dimensions,
            const std::string& config_path, const std::string& cache_dir,
            const std::string& cache_mode, const std::string& out_dir) {
  revq::bench::RunConfig config;
  if (!config_path.empty())
    config = revq::bench::RunConfig::load(config_path);
  if (!dimensions.empty()) config.dimensions = split_csv(dimensions);
  if (!cache_dir.empty()) config.cache_dir = cache_dir;
  if (!cache_mode.empty()) config.cache_mode = cache_mode;
  if (!out_dir.empty()) config.out_dir = out_dir;

  auto ingest = revq::bench::ingest_corpus(corpus_dir);
  for (const auto& d : ingest.diagnostics)
    std::cerr << "skipping " << d.path << ": " << d.error << "\n";

  auto clients = revq::bench::make_default_clients(config);
  revq::bench::RunUsage usage;
  auto profiles =
      revq::bench::run_pipelines(ingest.entries, config, clients, &usage);

  std::filesystem::path out = config.out_dir;
  revq::bench::write_profiles(profiles, out / "profiles");
  json manifest = revq::bench::make_manifest(config, profiles);
  manifest["usage"] = {{"backend_calls", usage.backend_calls},
                       {"cache_hits", usage.cache_hits},
                       {"prompt_bytes", usage.prompt_bytes},
                       {"response_bytes", usage.response_bytes}};
  {
    std::filesystem::path manifest_path = out / "run_manifest.json";
    std::filesystem::path tmp = manifest_path;
    tmp += ".tmp";
    std::ofstream(tmp, std::ios::trunc) << manifest.dump(2) << "\n";
    std::filesystem::rename(tmp, manifest_path);
  }

  std::size_t failures = 0;
  for (const auto& p : profiles) failures += p.errors.size();
  std::cout << "profiles: " << profiles.size() << " (granule failures: "
            << failures << ")\n"
            << "judge calls: " << usage.backend_calls << " (cache hits: "
            << usage.cache_hits << ")\n"
            << "wrote " << (out / "profiles").string() << "\n";
  return 0;
}

revq::bench::RunConfig config_for_profiles(const std::string& profiles_dir) {
  // Prefer the manifest written next to the profiles by `run`.
  auto manifest_path =
      std::filesystem::path(profiles_dir).parent_path() / "run_manifest.json";
  if (std::filesystem::exists(manifest_path)) {
    std::ifstream in(manifest_path);
    json manifest = json::parse(in, nullptr, false);
    if (!manifest.is_discarded() && manifest.contains("config"))
      return revq::bench::RunConfig::from_json(manifest["config"]);
  }
  return {};
}

int cmd_report(const std::string& profiles_dir, const std::string& out_dir) {
  auto profiles = revq::bench::load_profiles(profiles_dir);
  revq::bench::RunConfig config = config_for_profiles(profiles_dir);
  json report = revq::bench::emit_report(profiles, config);
  revq::bench::write_report(report, out_dir);
  std::cout << "report written to " << out_dir << "\n";
  return 0;
}

int cmd_stats(const std::string& profiles_dir, const std::string& tests) {
  auto profiles = revq::bench::load_profiles(profiles_dir);
  revq::bench::RunConfig config = config_for_profiles(profiles_dir);
  json report = revq::bench::emit_report(profiles, config);

  json out = json::object();
  for (const auto& t : split_csv(tests)) {
    if (t == "wilcoxon")
      out["wilcoxon"] = report["wilcoxon_holm"];
    else if (t == "mw")
      out["mann_whitney"] = report["accept_reject"];
    else if (t == "pearson")
      out["pearson"] = report["pearson"];
    else
      throw revq::InvalidArgument("unknown test '" + t +
                                   "' (expected wilcoxon,mw,pearson)");
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Batch evaluation engine for scientific peer reviews"};
  app.require_subcommand(1);

  std::string corpus_dir, dimensions, config_path, cache_dir, out_dir;
  std::string cache_mode;
  auto* run = app.add_subcommand("run", "Run dimension pipelines over a corpus");
  run->add_option("--corpus", corpus_dir, "Corpus directory (one JSON per paper)")
      ->required();
  run->add_option("--dimensions", dimensions,
                  "Comma-separated subset of doa,novelty,flaw,mcs");
  run->add_option("--config", config_path, "RunConfig JSON file");
  run->add_option("--cache", cache_dir, "Cache directory");
  run->add_option("--cache-mode", cache_mode, "record|replay|passthrough")
      ->check(CLI::IsMember({"record", "replay", "passthrough"}));
  run->add_option("--out", out_dir, "Output directory");

  std::string profiles_dir, report_out;
  auto* report = app.add_subcommand("report", "Aggregate profiles into a report");
  report->add_option("--profiles", profiles_dir, "Profiles directory")->required();
  report->add_option("--out", report_out, "Report output directory")->required();

  std::string stats_profiles, stats_tests = "wilcoxon,mw,pearson";
  auto* stats = app.add_subcommand("stats", "Print statistical test tables");
  stats->add_option("--profiles", stats_profiles, "Profiles directory")
      ->required();
  stats->add_option("--tests", stats_tests,
                    "Comma-separated subset of wilcoxon,mw,pearson");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed())
      return cmd_run(corpus_dir, dimensions, config_path, cache_dir, cache_mode,
                     out_dir);
    if (report->parsed()) return cmd_report(profiles_dir, report_out);
    if (stats->parsed()) return cmd_stats(stats_profiles, stats_tests);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
