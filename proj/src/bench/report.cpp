#include "revq/bench/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "revq/errors.hpp"
#include "revq/stats/stats.hpp"

namespace revq::bench {

namespace {

using nlohmann::json;

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
  std::size_t n = 0;
};

MeanStd mean_std(const std::vector<double>& xs) {
  MeanStd m;
  m.n = xs.size();
  if (xs.empty()) return m;
  for (double x : xs) m.mean += x;
  m.mean /= static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - m.mean) * (x - m.mean);
    m.std = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return m;
}

json per_review_table(const std::vector<DimensionProfile>& profiles) {
  json rows = json::array();
  for (const auto& p : profiles) {
    json metrics = json::object();
    auto put = [&](const char* name, std::optional<double> v) {
      metrics[name] = v ? json(*v) : json(nullptr);
    };
    put("doa", p.doa ? std::optional(p.doa->doa) : std::nullopt);
    put("premise_ratio",
        p.doa ? std::optional(p.doa->premise_ratio) : std::nullopt);
    put("grounding_score",
        p.doa ? std::optional(p.doa->grounding_score) : std::nullopt);
    put("ns", p.novelty ? std::optional(p.novelty->ns) : std::nullopt);
    put("sr", p.novelty ? std::optional(p.novelty->sr) : std::nullopt);
    put("ssr", p.novelty ? std::optional(p.novelty->ssr) : std::nullopt);
    put("claims_per_review",
        p.novelty ? std::optional(p.novelty->claims_per_review) : std::nullopt);
    put("critical_recall", p.flaws ? p.flaws->critical_recall : std::nullopt);
    put("minor_recall", p.flaws ? p.flaws->minor_recall : std::nullopt);
    put("ncps", p.flaws ? p.flaws->ncps : std::nullopt);
    put("mcs", p.mcs ? std::optional(p.mcs->mcs) : std::nullopt);
    put("ar", p.mcs ? std::optional(p.mcs->ar) : std::nullopt);
    put("sd", p.mcs ? std::optional(p.mcs->sd) : std::nullopt);
    put("cd", p.mcs ? std::optional(p.mcs->cd) : std::nullopt);

    json row = {{"paper_id", p.paper_id},     {"reviewer_id", p.reviewer_id},
                {"reviewer_type", p.reviewer_type}, {"venue", p.venue},
                {"year", p.year},             {"decision", p.decision},
                {"metrics", metrics}};
    if (!p.errors.empty()) row["errors"] = p.errors;
    rows.push_back(std::move(row));
  }
  return rows;
}

json venue_summary(const std::vector<DimensionProfile>& profiles) {
  // venue -> reviewer -> metric -> values ("macro" pools every venue)
  std::map<std::string, std::map<std::string, std::map<std::string, std::vector<double>>>>
      cells;
  for (const auto& p : profiles) {
    for (const auto& metric : kHeadlineMetrics) {
      auto v = metric_value(p, metric);
      if (!v) continue;
      cells[p.venue][p.reviewer_id][metric].push_back(*v);
      cells["macro"][p.reviewer_id][metric].push_back(*v);
    }
  }
  json out = json::object();
  for (const auto& [venue, reviewers] : cells) {
    json venue_json = json::object();
    for (const auto& [reviewer, metrics] : reviewers) {
      json reviewer_json = json::object();
      for (const auto& [metric, values] : metrics) {
        MeanStd m = mean_std(values);
        reviewer_json[metric] = {{"mean", m.mean}, {"std", m.std}, {"n", m.n}};
      }
      venue_json[reviewer] = std::move(reviewer_json);
    }
    out[venue] = std::move(venue_json);
  }
  return out;
}

/// Paired per-paper values of one metric for (baseline, human) in one venue.
stats::PairedSample paired_sample(const std::vector<DimensionProfile>& profiles,
                                  const std::string& baseline,
                                  const std::string& metric,
                                  const std::string& venue) {
  std::map<std::string, double> base_values, human_values;
  for (const auto& p : profiles) {
    if (p.venue != venue) continue;
    auto v = metric_value(p, metric);
    if (!v) continue;
    if (p.reviewer_id == baseline) base_values[p.paper_id] = *v;
    if (p.reviewer_type == "human") human_values[p.paper_id] = *v;
  }
  stats::PairedSample sample;
  for (const auto& [paper, v] : base_values) {
    auto it = human_values.find(paper);
    if (it == human_values.end()) continue;
    sample.labels.push_back(paper);
    sample.a.push_back(v);
    sample.b.push_back(it->second);
  }
  return sample;
}

json wilcoxon_holm_families(const std::vector<DimensionProfile>& profiles) {
  std::set<std::string> venues, baselines;
  for (const auto& p : profiles) {
    venues.insert(p.venue);
    if (p.reviewer_type != "human") baselines.insert(p.reviewer_id);
  }

  json out = json::object();
  for (const auto& baseline : baselines) {
    json baseline_json = json::object();
    for (const auto& metric : kHeadlineMetrics) {
      // One hypothesis family: this baseline x this metric across venues.
      std::vector<std::string> tested_venues;
      std::vector<double> raw_p;
      json venue_cells = json::object();
      for (const auto& venue : venues) {
        stats::PairedSample sample =
            paired_sample(profiles, baseline, metric, venue);
        if (sample.a.empty()) {
          venue_cells[venue] = {{"reason", "no paired data"}};
          continue;
        }
        stats::TestResult r = stats::wilcoxon_signed_rank(sample);
        json cell = {{"p_raw", r.p_value},
                     {"statistic", r.statistic},
                     {"effect_size", r.effect_size},
                     {"n_pairs", sample.a.size()},
                     {"n_effective", r.n_effective},
                     {"exact", r.exact}};
        if (r.degenerate) cell["degenerate"] = true;
        venue_cells[venue] = std::move(cell);
        tested_venues.push_back(venue);
        raw_p.push_back(r.p_value);
      }
      // The family shrinks to the computable p-values.
      std::vector<double> adjusted = stats::holm_correction(raw_p);
      for (std::size_t i = 0; i < tested_venues.size(); ++i)
        venue_cells[tested_venues[i]]["p_holm"] = adjusted[i];
      baseline_json[metric] = {{"venues", venue_cells},
                               {"family_size", tested_venues.size()}};
    }
    out[baseline] = std::move(baseline_json);
  }
  return out;
}

json accept_reject_tests(const std::vector<DimensionProfile>& profiles) {
  std::set<std::string> reviewers;
  for (const auto& p : profiles) reviewers.insert(p.reviewer_id);

  json out = json::object();
  for (const auto& reviewer : reviewers) {
    std::vector<std::string> tested_metrics;
    std::vector<double> raw_p;
    json metric_cells = json::object();
    for (const auto& metric : kHeadlineMetrics) {
      std::vector<double> accept, reject;
      for (const auto& p : profiles) {
        if (p.reviewer_id != reviewer) continue;
        auto v = metric_value(p, metric);
        if (!v) continue;
        (p.decision != "reject" ? accept : reject).push_back(*v);
      }
      if (accept.empty() || reject.empty()) {
        metric_cells[metric] = {{"reason", "need both accepted and rejected"}};
        continue;
      }
      stats::TestResult r = stats::mann_whitney_u(accept, reject);
      double delta = mean_std(accept).mean - mean_std(reject).mean;
      metric_cells[metric] = {{"delta", delta},
                              {"p_raw", r.p_value},
                              {"statistic", r.statistic},
                              {"effect_size", r.effect_size},
                              {"n_accept", accept.size()},
                              {"n_reject", reject.size()},
                              {"exact", r.exact}};
      tested_metrics.push_back(metric);
      raw_p.push_back(r.p_value);
    }
    std::vector<double> adjusted = stats::holm_correction(raw_p);
    for (std::size_t i = 0; i < tested_metrics.size(); ++i)
      metric_cells[tested_metrics[i]]["p_holm"] = adjusted[i];
    out[reviewer] = {{"metrics", metric_cells},
                     {"family_size", tested_metrics.size()}};
  }
  return out;
}

json pearson_matrix(const std::vector<DimensionProfile>& profiles) {
  const auto& metrics = kHeadlineMetrics;
  json r_matrix = json::array(), p_matrix = json::array(), n_matrix = json::array();
  for (std::size_t i = 0; i < metrics.size(); ++i) {
    json r_row = json::array(), p_row = json::array(), n_row = json::array();
    for (std::size_t j = 0; j < metrics.size(); ++j) {
      std::vector<double> x, y;
      for (const auto& p : profiles) {
        auto vi = metric_value(p, metrics[i]);
        auto vj = metric_value(p, metrics[j]);
        if (vi && vj) {
          x.push_back(*vi);
          y.push_back(*vj);
        }
      }
      auto res = stats::pearson_with_ttest(x, y);
      if (!res) {
        r_row.push_back(nullptr);
        p_row.push_back(nullptr);
      } else {
        r_row.push_back(res->statistic);
        p_row.push_back(res->p_value);
      }
      n_row.push_back(x.size());
    }
    r_matrix.push_back(std::move(r_row));
    p_matrix.push_back(std::move(p_row));
    n_matrix.push_back(std::move(n_row));
  }
  return {{"metrics", metrics}, {"r", r_matrix}, {"p", p_matrix}, {"n", n_matrix}};
}

json aspect_alignment(const std::vector<DimensionProfile>& profiles) {
  // Macro-average premise-level aspect distribution per reviewer.
  std::map<std::string, std::pair<std::array<double, 4>, std::size_t>> acc;
  for (const auto& p : profiles) {
    if (!p.doa) continue;
    const auto& counts = p.doa->aspect_premises.counts;
    double total = 0.0;
    for (auto c : counts) total += static_cast<double>(c);
    if (total == 0.0) continue;
    auto& [sums, n] = acc[p.reviewer_id];
    for (std::size_t i = 0; i < 4; ++i)
      sums[i] += static_cast<double>(counts[i]) / total;
    ++n;
  }

  std::map<std::string, std::vector<double>> distributions;
  std::optional<std::vector<double>> human;
  for (const auto& [reviewer, pair] : acc) {
    std::vector<double> dist(4);
    for (std::size_t i = 0; i < 4; ++i)
      dist[i] = pair.first[i] / static_cast<double>(pair.second);
    distributions[reviewer] = dist;
    if (reviewer == "human" || reviewer.starts_with("human")) human = dist;
  }

  json out = json::object();
  for (const auto& [reviewer, dist] : distributions) {
    json cell = {{"distribution", dist},
                 {"n_reviews", acc[reviewer].second},
                 {"entropy_bits", stats::shannon_entropy(dist)}};
    if (human)
      cell["jsd_vs_human"] = stats::jensen_shannon_divergence(dist, *human);
    else
      cell["jsd_vs_human"] = nullptr;
    out[reviewer] = std::move(cell);
  }
  return out;
}

json plot_series(const json& summary) {
  json out = json::object();
  std::set<std::string> venues, reviewers;
  for (const auto& [venue, rest] : summary.items()) {
    if (venue == "macro") continue;
    venues.insert(venue);
    for (const auto& [reviewer, _] : rest.items()) reviewers.insert(reviewer);
  }
  for (const auto& metric : kHeadlineMetrics) {
    json per_reviewer = json::object();
    for (const auto& reviewer : reviewers) {
      json means = json::array(), stds = json::array();
      for (const auto& venue : venues) {
        if (summary.contains(venue) && summary[venue].contains(reviewer) &&
            summary[venue][reviewer].contains(metric)) {
          means.push_back(summary[venue][reviewer][metric]["mean"]);
          stds.push_back(summary[venue][reviewer][metric]["std"]);
        } else {
          means.push_back(nullptr);
          stds.push_back(nullptr);
        }
      }
      per_reviewer[reviewer] = {{"means", means}, {"stds", stds}};
    }
    out[metric] = {{"venues", std::vector<std::string>(venues.begin(),
                                                       venues.end())},
                   {"series", per_reviewer}};
  }
  return out;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += "\"";
  return out;
}

std::string csv_number(const json& v) { return v.is_null() ? "" : v.dump(); }

void write_text(const std::filesystem::path& path, const std::string& body) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(body.data(), static_cast<std::streamsize>(body.size()));
  }
  std::filesystem::rename(tmp, path);
}

void write_per_review_csv(const json& rows, const std::filesystem::path& path) {
  static const char* kColumns[] = {
      "doa", "premise_ratio", "grounding_score", "ns", "sr", "ssr",
      "claims_per_review", "critical_recall", "minor_recall", "ncps",
      "mcs", "ar", "sd", "cd"};
  std::string body = "paper_id,reviewer_id,reviewer_type,venue,year,decision";
  for (const char* c : kColumns) body += std::string(",") + c;
  body += "\n";
  for (const auto& row : rows) {
    body += csv_escape(row["paper_id"].get<std::string>()) + "," +
            csv_escape(row["reviewer_id"].get<std::string>()) + "," +
            csv_escape(row["reviewer_type"].get<std::string>()) + "," +
            csv_escape(row["venue"].get<std::string>()) + "," +
            row["year"].dump() + "," + row["decision"].get<std::string>();
    for (const char* c : kColumns) body += "," + csv_number(row["metrics"][c]);
    body += "\n";
  }
  write_text(path, body);
}

void write_summary_csv(const json& summary, const std::filesystem::path& path) {
  std::string body = "venue,reviewer,metric,mean,std,n\n";
  for (const auto& [venue, reviewers] : summary.items())
    for (const auto& [reviewer, metrics] : reviewers.items())
      for (const auto& [metric, cell] : metrics.items())
        body += csv_escape(venue) + "," + csv_escape(reviewer) + "," + metric +
                "," + cell["mean"].dump() + "," + cell["std"].dump() + "," +
                cell["n"].dump() + "\n";
  write_text(path, body);
}

void write_wilcoxon_csv(const json& tests, const std::filesystem::path& path) {
  std::string body =
      "baseline,metric,venue,n_pairs,p_raw,p_holm,effect_size,reason\n";
  for (const auto& [baseline, metrics] : tests.items())
    for (const auto& [metric, family] : metrics.items())
      for (const auto& [venue, cell] : family["venues"].items()) {
        body += csv_escape(baseline) + "," + metric + "," + csv_escape(venue) + ",";
        if (cell.contains("reason")) {
          body += ",,,," + csv_escape(cell["reason"].get<std::string>());
        } else {
          body += cell["n_pairs"].dump() + "," + cell["p_raw"].dump() + "," +
                  cell["p_holm"].dump() + "," + cell["effect_size"].dump() + ",";
        }
        body += "\n";
      }
  write_text(path, body);
}

void write_accept_reject_csv(const json& tests,
                             const std::filesystem::path& path) {
  std::string body =
      "reviewer,metric,delta,p_raw,p_holm,n_accept,n_reject,reason\n";
  for (const auto& [reviewer, data] : tests.items())
    for (const auto& [metric, cell] : data["metrics"].items()) {
      body += csv_escape(reviewer) + "," + metric + ",";
      if (cell.contains("reason")) {
        body += ",,,,," + csv_escape(cell["reason"].get<std::string>());
      } else {
        body += cell["delta"].dump() + "," + cell["p_raw"].dump() + "," +
                cell["p_holm"].dump() + "," + cell["n_accept"].dump() + "," +
                cell["n_reject"].dump() + ",";
      }
      body += "\n";
    }
  write_text(path, body);
}

void write_pearson_csv(const json& matrix, const std::filesystem::path& path) {
  const auto& metrics = matrix["metrics"];
  std::string body = "metric";
  for (const auto& m : metrics) body += "," + m.get<std::string>();
  body += "\n";
  for (std::size_t i = 0; i < metrics.size(); ++i) {
    body += metrics[i].get<std::string>();
    for (std::size_t j = 0; j < metrics.size(); ++j)
      body += "," + csv_number(matrix["r"][i][j]);
    body += "\n";
  }
  write_text(path, body);
}

void write_aspect_csv(const json& table, const std::filesystem::path& path) {
  std::string body =
      "reviewer,novelty,methodology,experiment,clarity,jsd_vs_human,"
      "entropy_bits,n_reviews\n";
  for (const auto& [reviewer, cell] : table.items()) {
    body += csv_escape(reviewer);
    for (const auto& v : cell["distribution"]) body += "," + v.dump();
    body += "," + csv_number(cell["jsd_vs_human"]) + "," +
            cell["entropy_bits"].dump() + "," + cell["n_reviews"].dump() + "\n";
  }
  write_text(path, body);
}

}  // namespace

std::optional<double> metric_value(const DimensionProfile& p,
                                   const std::string& metric) {
  if (metric == "doa") return p.doa ? std::optional(p.doa->doa) : std::nullopt;
  if (metric == "ns") return p.novelty ? std::optional(p.novelty->ns) : std::nullopt;
  if (metric == "critical_recall")
    return p.flaws ? p.flaws->critical_recall : std::nullopt;
  if (metric == "minor_recall")
    return p.flaws ? p.flaws->minor_recall : std::nullopt;
  if (metric == "ncps") return p.flaws ? p.flaws->ncps : std::nullopt;
  if (metric == "mcs") return p.mcs ? std::optional(p.mcs->mcs) : std::nullopt;
  throw InvalidArgument("unknown metric '" + metric + "'");
}

json emit_report(const std::vector<DimensionProfile>& profiles,
                 const RunConfig& config) {
  if (profiles.empty()) throw InvalidArgument("no profiles to report");

  json report;
  report["per_review"] = per_review_table(profiles);
  report["venue_summary"] = venue_summary(profiles);
  report["wilcoxon_holm"] = wilcoxon_holm_families(profiles);
  report["accept_reject"] = accept_reject_tests(profiles);
  report["pearson"] = pearson_matrix(profiles);
  report["aspect_alignment"] = aspect_alignment(profiles);
  report["plot_series"] = plot_series(report["venue_summary"]);
  // Snapshot of the scoring-relevant config. Local filesystem paths are
  // dropped so replayed reports stay byte-identical across machines.
  json config_snapshot = config.to_json();
  config_snapshot.erase("out_dir");
  config_snapshot["cache"].erase("dir");
  report["config"] = config_snapshot;
  return report;
}

void write_report(const json& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_text(dir / "report.json", report.dump(2) + "\n");
  write_per_review_csv(report["per_review"], dir / "per_review.csv");
  write_summary_csv(report["venue_summary"], dir / "venue_summary.csv");
  write_wilcoxon_csv(report["wilcoxon_holm"], dir / "wilcoxon_holm.csv");
  write_accept_reject_csv(report["accept_reject"], dir / "accept_reject.csv");
  write_pearson_csv(report["pearson"], dir / "pearson.csv");
  write_aspect_csv(report["aspect_alignment"], dir / "aspect_alignment.csv");
}

}  // namespace revq::bench
