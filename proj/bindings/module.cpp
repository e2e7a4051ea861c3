#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "revq/arc/arc.hpp"
#include "revq/doa/doa.hpp"
#include "revq/errors.hpp"
#include "revq/text.hpp"
#include "revq/flaw/flaw.hpp"
#include "revq/judge/client.hpp"
#include "revq/judge/schema.hpp"
#include "revq/novelty/novelty.hpp"
#include "revq/retrieval/pool.hpp"
#include "revq/stats/stats.hpp"

namespace py = pybind11;

using namespace revq;

namespace {

/// (role, aspect, grounding|None) triples -> ArgumentUnit list.
std::vector<doa::ArgumentUnit> units_from_tuples(
    const std::vector<std::tuple<std::string, std::string, py::object>>& tuples) {
  std::vector<doa::ArgumentUnit> units;
  int ordinal = 0;
  for (const auto& [role, aspect, grounding] : tuples) {
    doa::ArgumentUnit u;
    u.text = "unit";
    auto r = vocab::parse_role(role);
    auto a = vocab::parse_aspect(aspect);
    if (!r || !a) throw InvalidArgument("bad role/aspect: " + role + "/" + aspect);
    u.role = *r;
    u.aspect = *a;
    if (!grounding.is_none()) u.grounding = grounding.cast<int>();
    u.ordinal = ++ordinal;
    units.push_back(std::move(u));
  }
  return units;
}

py::object doa_to_dict(const std::optional<doa::DoAResult>& r) {
  if (!r) return py::none();
  py::dict d;
  d["total_units"] = r->total_units;
  d["premise_count"] = r->premise_count;
  d["premise_ratio"] = r->premise_ratio;
  d["grounding_score"] = r->grounding_score;
  d["doa"] = r->doa;
  return d;
}

}  // namespace

PYBIND11_MODULE(_revq, m) {
  m.doc() = "Peer-review evaluation engine: scoring kernels and statistics";

  // ---- depth of analysis -------------------------------------------------
  m.def(
      "compute_doa",
      [](const std::vector<std::tuple<std::string, std::string, py::object>>&
             units) { return doa_to_dict(doa::compute_doa(units_from_tuples(units))); },
      py::arg("units"),
      "DoA from (role, aspect, grounding) triples; grounding is None for "
      "claims. Returns None for an empty unit list.");
  m.def(
      "aspect_distribution",
      [](const std::vector<std::tuple<std::string, std::string, py::object>>&
             units,
         bool premises_only) {
        return doa::aspect_distribution(units_from_tuples(units), premises_only);
      },
      py::arg("units"), py::arg("premises_only") = false);

  // ---- novelty -----------------------------------------------------------
  m.def(
      "aggregate_claim",
      [](const std::vector<std::pair<std::string, int>>& verdicts,
         const std::map<std::string, double>& relevances,
         const std::string& policy) {
        std::vector<novelty::PairVerdict> vs;
        for (const auto& [candidate_id, score] : verdicts) {
          novelty::PairVerdict v;
          v.candidate_id = candidate_id;
          v.score = score;
          vs.push_back(std::move(v));
        }
        return novelty::aggregate_claim(
            vs, relevances, novelty::aggregation_policy_from_name(policy));
      },
      py::arg("verdicts"), py::arg("relevances"),
      py::arg("policy") = "top3-weighted",
      "Per-claim aggregation over (candidate_id, score) verdicts.");
  m.def(
      "novelty_metrics",
      [](const std::vector<double>& per_claim) -> py::object {
        auto r = novelty::compute_novelty_metrics(per_claim);
        if (!r) return py::none();
        py::dict d;
        d["mean_raw"] = r->mean_raw;
        d["ns"] = r->ns;
        d["sr"] = r->sr;
        d["ssr"] = r->ssr;
        return d;
      },
      py::arg("per_claim_scores"));

  // ---- flaw prioritization -------------------------------------------------
  m.def(
      "compute_ncps",
      [](const std::vector<std::string>& severities) -> py::object {
        flaw::RankedFlawList ranked;
        int position = 0;
        for (const auto& s : severities) {
          auto sev = vocab::parse_severity(s);
          if (!sev) throw InvalidArgument("severity must be Critical|Minor");
          ranked.entries.push_back(
              {"F" + std::to_string(position + 1), ++position,
               flaw::SeverityWeights{}.of(*sev)});
        }
        auto r = flaw::compute_ncps(ranked);
        return r ? py::object(py::float_(*r)) : py::none();
      },
      py::arg("severities"),
      "nCPS of a flaw list given severities in review order "
      "('Critical'/'Minor'). None for an empty list.");

  // ---- constructiveness ----------------------------------------------------
  m.def(
      "compute_mcs",
      [](const std::vector<std::array<int, 5>>& scores) -> py::object {
        std::vector<arc::AtomicComment> arcs;
        int i = 0;
        for (const auto& s : scores) {
          arc::AtomicComment a;
          a.arc_id = "A" + std::to_string(++i);
          a.d_scores = s;
          arcs.push_back(std::move(a));
        }
        auto r = arc::compute_mcs(arcs);
        if (!r) return py::none();
        py::dict d;
        d["mcs"] = r->mcs;
        d["dim_means"] = r->dim_means;
        d["ar"] = r->ar;
        d["sd"] = r->sd;
        d["cd"] = r->cd;
        d["per_arc_clc"] = r->per_arc_clc;
        return d;
      },
      py::arg("d_scores"),
      "MCS and derived densities from per-ARC [D1..D5] score rows.");

  // ---- retrieval kernel ----------------------------------------------------
  py::class_<retrieval::CandidateWork>(m, "CandidateWork")
      .def(py::init([](std::string id, std::string title, std::string abstract,
                       int year, double relevance) {
             retrieval::CandidateWork c;
             c.id = std::move(id);
             c.title = std::move(title);
             c.abstract = std::move(abstract);
             c.year = year;
             c.relevance = relevance;
             return c;
           }),
           py::arg("id"), py::arg("title"), py::arg("abstract"),
           py::arg("year") = 0, py::arg("relevance") = 0.0)
      .def_readwrite("id", &retrieval::CandidateWork::id)
      .def_readwrite("title", &retrieval::CandidateWork::title)
      .def_readwrite("abstract", &retrieval::CandidateWork::abstract)
      .def_readwrite("year", &retrieval::CandidateWork::year)
      .def_readwrite("relevance", &retrieval::CandidateWork::relevance);

  m.def("filter_candidates", &retrieval::filter_candidates, py::arg("raw"),
        py::arg("submission_year"));
  m.def("dedup_candidates", &retrieval::dedup_candidates, py::arg("pool"),
        py::arg("threshold") = 0.96);
  m.def("mmr_select", &retrieval::mmr_select, py::arg("pool"), py::arg("k"),
        py::arg("lambda_") = 0.5);
  m.def("trigram_cosine", &text::trigram_cosine, py::arg("a"), py::arg("b"));

  // ---- statistics ----------------------------------------------------------
  auto test_result_to_dict = [](const stats::TestResult& r) {
    py::dict d;
    d["statistic"] = r.statistic;
    d["p_value"] = r.p_value;
    d["effect_size"] = r.effect_size;
    d["n_effective"] = r.n_effective;
    d["degenerate"] = r.degenerate;
    d["exact"] = r.exact;
    return d;
  };
  m.def(
      "wilcoxon_signed_rank",
      [test_result_to_dict](const std::vector<double>& a,
                            const std::vector<double>& b) {
        return test_result_to_dict(stats::wilcoxon_signed_rank({{}, a, b}));
      },
      py::arg("a"), py::arg("b"));
  m.def(
      "mann_whitney_u",
      [test_result_to_dict](const std::vector<double>& a,
                            const std::vector<double>& b) {
        return test_result_to_dict(stats::mann_whitney_u(a, b));
      },
      py::arg("a"), py::arg("b"));
  m.def("holm_correction", &stats::holm_correction, py::arg("p_values"));
  m.def(
      "pearson_with_ttest",
      [test_result_to_dict](const std::vector<double>& x,
                            const std::vector<double>& y) -> py::object {
        auto r = stats::pearson_with_ttest(x, y);
        if (!r) return py::none();
        return test_result_to_dict(*r);
      },
      py::arg("x"), py::arg("y"));
  m.def("jensen_shannon_divergence", &stats::jensen_shannon_divergence,
        py::arg("p"), py::arg("q"));
  m.def("shannon_entropy", &stats::shannon_entropy, py::arg("p"));

  // ---- judge gateway ---------------------------------------------------------
  m.def(
      "render_prompt",
      [](const std::string& phase, const std::map<std::string, std::string>&
                                       slots) {
        return judge::render_prompt(judge::phase_from_id(phase),
                                    judge::SlotMap(slots.begin(), slots.end()));
      },
      py::arg("phase"), py::arg("slots"));
  m.def(
      "parse_strict_json",
      [](const std::string& raw, const std::string& phase) {
        return judge::parse_strict_json(raw, judge::phase_from_id(phase)).dump();
      },
      py::arg("raw"), py::arg("phase"),
      "Validates a raw judge response; returns the canonical JSON dump.");
  m.def(
      "request_digest",
      [](const std::string& phase, const std::map<std::string, std::string>&
                                       slots,
         const std::string& backend_id) {
        judge::JudgeRequest req{judge::phase_from_id(phase),
                                judge::SlotMap(slots.begin(), slots.end()),
                                {}};
        return judge::request_digest(req, backend_id);
      },
      py::arg("phase"), py::arg("slots"), py::arg("backend_id"));

  // Base first: later registrations are matched first, so the derived
  // SchemaViolation translator takes precedence.
  py::register_exception<revq::Error>(m, "PrismError", PyExc_RuntimeError);
  py::register_exception<revq::SchemaViolation>(m, "SchemaViolation",
                                                 PyExc_ValueError);
}
