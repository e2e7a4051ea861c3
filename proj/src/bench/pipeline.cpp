#include "revq/bench/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <functional>
#include <mutex>
#include <set>
#include <thread>

#include "revq/errors.hpp"
#include "revq/text.hpp"

namespace revq::bench {

namespace {

using nlohmann::json;

json optional_double(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

std::optional<double> double_or_nullopt(const json& v) {
  if (v.is_null()) return std::nullopt;
  return v.get<double>();
}

json doa_to_json(const doa::DoAResult& r) {
  return {{"total_units", r.total_units},
          {"premise_count", r.premise_count},
          {"premise_ratio", r.premise_ratio},
          {"grounding_score", r.grounding_score},
          {"doa", r.doa},
          {"aspect_all", r.aspect_all.counts},
          {"aspect_premises", r.aspect_premises.counts}};
}

doa::DoAResult doa_from_json(const json& j) {
  doa::DoAResult r;
  r.total_units = j.at("total_units").get<std::size_t>();
  r.premise_count = j.at("premise_count").get<std::size_t>();
  r.premise_ratio = j.at("premise_ratio").get<double>();
  r.grounding_score = j.at("grounding_score").get<double>();
  r.doa = j.at("doa").get<double>();
  r.aspect_all.counts = j.at("aspect_all").get<std::array<std::size_t, 4>>();
  r.aspect_premises.counts =
      j.at("aspect_premises").get<std::array<std::size_t, 4>>();
  return r;
}

json novelty_to_json(const novelty::NoveltyResult& r) {
  return {{"per_claim_scores", r.per_claim_scores},
          {"mean_raw", r.mean_raw},
          {"ns", r.ns},
          {"sr", r.sr},
          {"ssr", r.ssr},
          {"claims_per_review", r.claims_per_review}};
}

novelty::NoveltyResult novelty_from_json(const json& j) {
  novelty::NoveltyResult r;
  r.per_claim_scores = j.at("per_claim_scores").get<std::vector<double>>();
  r.mean_raw = j.at("mean_raw").get<double>();
  r.ns = j.at("ns").get<double>();
  r.sr = j.at("sr").get<double>();
  r.ssr = j.at("ssr").get<double>();
  r.claims_per_review = j.at("claims_per_review").get<double>();
  return r;
}

json flaws_to_json(const flaw::FlawScores& r) {
  return {{"critical_recall", optional_double(r.critical_recall)},
          {"minor_recall", optional_double(r.minor_recall)},
          {"ncps", optional_double(r.ncps)},
          {"valid_critical", r.valid_critical},
          {"valid_minor", r.valid_minor},
          {"hallucinated", r.hallucinated},
          {"extracted", r.extracted}};
}

flaw::FlawScores flaws_from_json(const json& j) {
  flaw::FlawScores r;
  r.critical_recall = double_or_nullopt(j.at("critical_recall"));
  r.minor_recall = double_or_nullopt(j.at("minor_recall"));
  r.ncps = double_or_nullopt(j.at("ncps"));
  r.valid_critical = j.at("valid_critical").get<std::size_t>();
  r.valid_minor = j.at("valid_minor").get<std::size_t>();
  r.hallucinated = j.at("hallucinated").get<std::size_t>();
  r.extracted = j.at("extracted").get<std::size_t>();
  return r;
}

json mcs_to_json(const arc::ConstructivenessResult& r) {
  return {{"per_arc_clc", r.per_arc_clc}, {"mcs", r.mcs},
          {"dim_means", r.dim_means},     {"ar", r.ar},
          {"sd", r.sd},                   {"cd", r.cd}};
}

arc::ConstructivenessResult mcs_from_json(const json& j) {
  arc::ConstructivenessResult r;
  r.per_arc_clc = j.at("per_arc_clc").get<std::vector<double>>();
  r.mcs = j.at("mcs").get<double>();
  r.dim_means = j.at("dim_means").get<std::array<double, 5>>();
  r.ar = j.at("ar").get<double>();
  r.sd = j.at("sd").get<double>();
  r.cd = j.at("cd").get<double>();
  return r;
}

std::string sanitize_for_filename(const std::string& s) {
  std::string out;
  for (char c : s)
    out.push_back(std::isalnum(static_cast<unsigned char>(c)) || c == '-' ||
                          c == '_'
                      ? c
                      : '_');
  return out;
}

void run_bounded(std::vector<std::function<void()>>& tasks, int workers) {
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      tasks[i]();
    }
  };
  std::vector<std::thread> pool;
  int n = std::max(1, std::min<int>(workers, static_cast<int>(tasks.size())));
  pool.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

}  // namespace

json profile_to_json(const DimensionProfile& p) {
  json doc = {{"paper_id", p.paper_id},
              {"reviewer_id", p.reviewer_id},
              {"reviewer_type", p.reviewer_type},
              {"paper",
               {{"venue", p.venue}, {"year", p.year}, {"decision", p.decision}}}};
  if (p.doa) doc["doa"] = doa_to_json(*p.doa);
  if (p.novelty) doc["novelty"] = novelty_to_json(*p.novelty);
  if (p.flaws) doc["flaws"] = flaws_to_json(*p.flaws);
  if (p.mcs) doc["mcs"] = mcs_to_json(*p.mcs);
  if (!p.errors.empty()) doc["errors"] = p.errors;
  json provenance = {{"backend", p.backend_id},
                     {"cache_digests", p.cache_digests}};
  if (p.generated_at) provenance["generated_at"] = *p.generated_at;
  doc["provenance"] = provenance;
  return doc;
}

DimensionProfile profile_from_json(const json& doc) {
  DimensionProfile p;
  p.paper_id = doc.at("paper_id").get<std::string>();
  p.reviewer_id = doc.at("reviewer_id").get<std::string>();
  p.reviewer_type = doc.at("reviewer_type").get<std::string>();
  const json& paper = doc.at("paper");
  p.venue = paper.at("venue").get<std::string>();
  p.year = paper.at("year").get<int>();
  p.decision = paper.at("decision").get<std::string>();
  if (doc.contains("doa")) p.doa = doa_from_json(doc["doa"]);
  if (doc.contains("novelty")) p.novelty = novelty_from_json(doc["novelty"]);
  if (doc.contains("flaws")) p.flaws = flaws_from_json(doc["flaws"]);
  if (doc.contains("mcs")) p.mcs = mcs_from_json(doc["mcs"]);
  if (doc.contains("errors"))
    p.errors = doc["errors"].get<std::map<std::string, std::string>>();
  if (doc.contains("provenance")) {
    const json& prov = doc["provenance"];
    p.backend_id = prov.value("backend", "");
    if (prov.contains("cache_digests"))
      p.cache_digests = prov["cache_digests"].get<std::vector<std::string>>();
    if (prov.contains("generated_at"))
      p.generated_at = prov["generated_at"].get<long>();
  }
  return p;
}

Clients make_default_clients(const RunConfig& config) {
  Clients clients;
  judge::HttpBackendConfig judge_config;
  judge_config.model = config.judge_model;
  judge_config.base_url = config.judge_base_url;
  judge_config.api_key_env = config.judge_api_key_env;
  clients.judge_backend = make_http_backend(judge_config);
  clients.judge_store =
      std::make_shared<judge::ReplayStore>(config.cache_dir / "judge");

  retrieval::ScholarConfig scholar_config;
  scholar_config.base_url = config.scholar_base_url;
  scholar_config.api_key_env = config.scholar_api_key_env;
  clients.scholar_transport = retrieval::make_scholar_transport(scholar_config);
  clients.scholar_store =
      std::make_shared<judge::ReplayStore>(config.cache_dir / "scholar");
  return clients;
}

std::vector<DimensionProfile> run_pipelines(
    const std::vector<CorpusEntry>& corpus, const RunConfig& config,
    const Clients& clients, RunUsage* usage) {
  const judge::CacheMode mode = judge::cache_mode_from_name(config.cache_mode);
  auto usage_counter = std::make_shared<judge::UsageCounter>();
  const judge::DecodeParams decode{config.temperature, config.top_p};
  const bool replay = mode == judge::CacheMode::Replay;

  // Pre-create one profile per (paper, reviewer identity); identities come
  // from the union of per-dimension bundle policies.
  std::map<std::pair<std::string, std::string>, DimensionProfile> profiles;
  std::mutex profiles_mutex;

  auto ensure_profile = [&](const CorpusEntry& entry, const ReviewDocument& r) {
    auto key = std::make_pair(entry.paper_id, r.reviewer_id);
    auto it = profiles.find(key);
    if (it == profiles.end()) {
      DimensionProfile p;
      p.paper_id = entry.paper_id;
      p.reviewer_id = r.reviewer_id;
      p.reviewer_type = r.reviewer_type;
      p.venue = entry.venue;
      p.year = entry.year;
      p.decision = entry.decision;
      p.backend_id = clients.judge_backend->id();
      it = profiles.emplace(key, std::move(p)).first;
    }
    return it;
  };

  struct Granule {
    const CorpusEntry* entry;
    std::string dimension;
    std::vector<ReviewDocument> reviews;  // one for doa/novelty/mcs
  };
  std::vector<Granule> granules;

  for (const auto& entry : corpus) {
    for (const std::string dim : {"doa", "novelty", "mcs"}) {
      if (!config.runs_dimension(dim)) continue;
      for (const auto& review :
           bundle_reviews(entry, config.concatenate_humans(dim))) {
        ensure_profile(entry, review);
        granules.push_back({&entry, dim, {review}});
      }
    }
    if (config.runs_dimension("flaw")) {
      auto reviews = bundle_reviews(entry, config.concatenate_humans("flaw"));
      for (const auto& review : reviews) ensure_profile(entry, review);
      granules.push_back({&entry, "flaw", std::move(reviews)});
    }
  }

  auto record_digests = [&](DimensionProfile& p, const judge::DigestTrace& trace) {
    for (const auto& d : trace.sorted())
      if (std::find(p.cache_digests.begin(), p.cache_digests.end(), d) ==
          p.cache_digests.end())
        p.cache_digests.push_back(d);
    std::sort(p.cache_digests.begin(), p.cache_digests.end());
  };

  std::vector<std::function<void()>> tasks;
  tasks.reserve(granules.size());
  for (const auto& granule : granules) {
    tasks.push_back([&, granule] {
      auto trace = std::make_shared<judge::DigestTrace>();
      judge::JudgeClient judge_client(clients.judge_backend, clients.judge_store,
                                      mode, {}, trace, decode);
      judge_client.set_usage_counter(usage_counter);
      const CorpusEntry& entry = *granule.entry;

      if (granule.dimension == "flaw") {
        std::vector<flaw::MicroFlaw> adjudicated;
        std::string failure;
        try {
          auto flaws = flaw::atomize_flaws(judge_client, granule.reviews);
          adjudicated =
              flaw::adjudicate_flaws(judge_client, flaws, entry.paper_text);
        } catch (const std::exception& e) {
          failure = e.what();
        }
        std::lock_guard lock(profiles_mutex);
        for (const auto& review : granule.reviews) {
          auto it = ensure_profile(entry, review);
          if (!failure.empty()) {
            it->second.errors["flaw"] = failure;
          } else {
            it->second.flaws = flaw::score_reviewer(review, adjudicated);
          }
          record_digests(it->second, *trace);
        }
        return;
      }

      const ReviewDocument& review = granule.reviews.front();
      std::optional<doa::DoAResult> doa_result;
      std::optional<novelty::NoveltyResult> novelty_result;
      std::optional<arc::ConstructivenessResult> mcs_result;
      std::string failure;
      try {
        if (granule.dimension == "doa") {
          doa_result = doa::run_pipeline(judge_client, review);
        } else if (granule.dimension == "novelty") {
          retrieval::ScholarClient scholar(clients.scholar_transport,
                                           clients.scholar_store, mode, trace);
          novelty::PipelineInputs inputs;
          inputs.paper_text = entry.paper_text;
          inputs.paper_context = entry.paper_context();
          inputs.submission_year = entry.year;
          inputs.mmr_k = config.retrieval_k;
          inputs.mmr_lambda = config.mmr_lambda;
          inputs.dedup_threshold = config.dedup_threshold;
          inputs.per_query_limit = config.per_query_limit;
          inputs.policy =
              novelty::aggregation_policy_from_name(config.aggregation_policy);
          novelty_result =
              novelty::run_pipeline(judge_client, scholar, review, inputs);
        } else {
          mcs_result = arc::run_pipeline(judge_client, review);
        }
      } catch (const std::exception& e) {
        failure = e.what();
      }

      std::lock_guard lock(profiles_mutex);
      auto it = ensure_profile(entry, review);
      if (!failure.empty()) {
        it->second.errors[granule.dimension] = failure;
      } else if (granule.dimension == "doa") {
        it->second.doa = doa_result;
      } else if (granule.dimension == "novelty") {
        it->second.novelty = novelty_result;
      } else {
        it->second.mcs = mcs_result;
      }
      record_digests(it->second, *trace);
    });
  }

  run_bounded(tasks, config.parallelism);
  if (usage != nullptr) {
    usage->backend_calls = usage_counter->backend_calls.load();
    usage->cache_hits = usage_counter->cache_hits.load();
    usage->prompt_bytes = usage_counter->prompt_bytes.load();
    usage->response_bytes = usage_counter->response_bytes.load();
  }

  long now = static_cast<long>(std::chrono::duration_cast<std::chrono::seconds>(
                                   std::chrono::system_clock::now()
                                       .time_since_epoch())
                                   .count());
  std::vector<DimensionProfile> out;
  out.reserve(profiles.size());
  for (auto& [key, p] : profiles) {
    if (!replay) p.generated_at = now;
    out.push_back(std::move(p));
  }
  return out;  // std::map iteration keeps (paper, reviewer) order deterministic
}

void write_profiles(const std::vector<DimensionProfile>& profiles,
                    const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& p : profiles) {
    std::string name = sanitize_for_filename(p.paper_id) + "__" +
                       sanitize_for_filename(p.reviewer_id) + ".json";
    std::filesystem::path path = dir / name;
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
      std::ofstream out(tmp, std::ios::trunc);
      out << profile_to_json(p).dump(2) << "\n";
    }
    std::filesystem::rename(tmp, path);
  }
}

std::vector<DimensionProfile> load_profiles(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir))
    throw InvalidArgument("profiles path is not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());

  std::vector<DimensionProfile> out;
  for (const auto& path : files) {
    std::ifstream in(path);
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded())
      throw InvalidArgument("profile is not valid JSON: " + path.string());
    out.push_back(profile_from_json(doc));
  }
  return out;
}

json make_manifest(const RunConfig& config,
                   const std::vector<DimensionProfile>& profiles) {
  std::set<std::string> digests;
  for (const auto& p : profiles)
    digests.insert(p.cache_digests.begin(), p.cache_digests.end());
  json manifest = {{"config", config.to_json()},
                   {"profiles", profiles.size()},
                   {"cache_digests", std::vector<std::string>(digests.begin(),
                                                              digests.end())}};
  if (config.cache_mode != "replay")
    manifest["generated_at"] =
        std::chrono::duration_cast<std::chrono::seconds>(
            std::chrono::system_clock::now().time_since_epoch())
            .count();
  return manifest;
}

}  // namespace bench
