#include <doctest.h>

#include <random>

#include "revq/doa/doa.hpp"
#include "revq/errors.hpp"
#include "support/stubs.hpp"

using namespace revq;
using doa::ArgumentUnit;
using vocab::Aspect;
using vocab::Role;

namespace {

ArgumentUnit unit(Role role, Aspect aspect, std::optional<int> g = std::nullopt) {
  ArgumentUnit u;
  u.text = "unit";
  u.role = role;
  u.aspect = aspect;
  u.grounding = g;
  return u;
}

std::vector<ArgumentUnit> random_units(std::mt19937& rng, std::size_t max_n = 24) {
  std::uniform_int_distribution<int> n_dist(1, static_cast<int>(max_n));
  std::uniform_int_distribution<int> role_dist(0, 1);
  std::uniform_int_distribution<int> aspect_dist(0, 3);
  std::uniform_int_distribution<int> g_dist(0, 2);
  std::vector<ArgumentUnit> units;
  int n = n_dist(rng);
  for (int i = 0; i < n; ++i) {
    Role role = role_dist(rng) == 0 ? Role::Claim : Role::Premise;
    std::optional<int> g;
    if (role == Role::Premise) g = g_dist(rng);
    units.push_back(unit(role, static_cast<Aspect>(aspect_dist(rng)), g));
  }
  return units;
}

double doa_of(const std::vector<ArgumentUnit>& units) {
  auto r = doa::compute_doa(units);
  REQUIRE(r.has_value());
  return r->doa;
}

}  // namespace

TEST_CASE("compute_doa: worked example 4 units, groundings {0,1,2}") {
  std::vector<ArgumentUnit> units = {
      unit(Role::Claim, Aspect::Experiment),
      unit(Role::Premise, Aspect::Experiment, 0),
      unit(Role::Premise, Aspect::Experiment, 1),
      unit(Role::Premise, Aspect::Methodology, 2),
  };
  auto r = doa::compute_doa(units);
  REQUIRE(r.has_value());
  CHECK(r->premise_ratio == doctest::Approx(0.75));
  CHECK(r->grounding_score == doctest::Approx(0.5));
  CHECK(r->doa == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(r->aspect_all.counts[static_cast<int>(Aspect::Experiment)] == 3);
  CHECK(r->aspect_premises.counts[static_cast<int>(Aspect::Methodology)] == 1);
}

TEST_CASE("compute_doa: no premises gives 0 by definition; no units gives absent") {
  std::vector<ArgumentUnit> claims = {unit(Role::Claim, Aspect::Novelty),
                                      unit(Role::Claim, Aspect::Clarity)};
  auto r = doa::compute_doa(claims);
  REQUIRE(r.has_value());
  CHECK(r->doa == 0.0);
  CHECK(r->premise_count == 0);

  CHECK_FALSE(doa::compute_doa({}).has_value());
}

TEST_CASE("compute_doa: all premises at grounding 2 reach the maximum") {
  std::vector<ArgumentUnit> units = {unit(Role::Premise, Aspect::Methodology, 2),
                                     unit(Role::Premise, Aspect::Experiment, 2)};
  CHECK(doa_of(units) == doctest::Approx(1.0));
}

TEST_CASE("DoA properties: bounds, harmonic-mean bound, permutation invariance") {
  std::mt19937 rng(20250810);
  for (int trial = 0; trial < 250; ++trial) {
    auto units = random_units(rng);
    auto r = doa::compute_doa(units);
    REQUIRE(r.has_value());
    CHECK(r->doa >= 0.0);
    CHECK(r->doa <= 1.0);
    CHECK(r->doa <= 2.0 * r->premise_ratio + 1e-12);
    CHECK(r->doa <= 2.0 * r->grounding_score + 1e-12);
    // Harmonic mean never exceeds the arithmetic mean.
    CHECK(r->doa <= (r->premise_ratio + r->grounding_score) / 2.0 + 1e-12);

    auto shuffled = units;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    auto r2 = doa::compute_doa(shuffled);
    REQUIRE(r2.has_value());
    CHECK(r2->doa == doctest::Approx(r->doa).epsilon(1e-12));
    CHECK(r2->aspect_all.counts == r->aspect_all.counts);
  }
}

TEST_CASE("DoA property: upgrading one premise's grounding never decreases DoA") {
  std::mt19937 rng(424243);
  int checked = 0;
  for (int trial = 0; trial < 400 && checked < 200; ++trial) {
    auto units = random_units(rng);
    std::vector<std::size_t> upgradable;
    for (std::size_t i = 0; i < units.size(); ++i)
      if (units[i].role == Role::Premise && *units[i].grounding < 2)
        upgradable.push_back(i);
    if (upgradable.empty()) continue;
    double before = doa_of(units);
    auto upgraded = units;
    std::size_t pick = upgradable[static_cast<std::size_t>(rng()) % upgradable.size()];
    *upgraded[pick].grounding += 1;
    CHECK(doa_of(upgraded) >= before - 1e-12);
    ++checked;
  }
  CHECK(checked >= 200);
}

TEST_CASE("aspect_distribution: point mass, uniform, premises-only filter") {
  std::vector<ArgumentUnit> all_methodology = {
      unit(Role::Claim, Aspect::Methodology),
      unit(Role::Premise, Aspect::Methodology, 1)};
  auto d = doa::aspect_distribution(all_methodology, false);
  CHECK(d == std::vector<double>{0, 1, 0, 0});

  std::vector<ArgumentUnit> uniform = {
      unit(Role::Premise, Aspect::Novelty, 0),
      unit(Role::Premise, Aspect::Methodology, 0),
      unit(Role::Premise, Aspect::Experiment, 0),
      unit(Role::Premise, Aspect::Clarity, 0)};
  auto u = doa::aspect_distribution(uniform, true);
  for (double v : u) CHECK(v == doctest::Approx(0.25));

  std::vector<ArgumentUnit> claims_only = {unit(Role::Claim, Aspect::Novelty)};
  CHECK_THROWS_AS(doa::aspect_distribution(claims_only, true), InvalidArgument);
}

TEST_CASE("split_marked_text: spans, heading skipping, reconstruction check") {
  std::string original = "Weaknesses:\nFirst point. Second point follows.";
  std::string marked = "Weaknesses:\nFirst point. <sep> Second point follows.";
  auto spans = doa::split_marked_text(marked, original);
  REQUIRE(spans.size() == 2);
  CHECK(spans[0] == "First point.");  // heading stripped
  CHECK(spans[1] == "Second point follows.");

  // Whitespace-only differences are tolerated.
  std::string spaced = "Weaknesses:\n First point.<sep>Second   point follows.";
  CHECK(doa::split_marked_text(spaced, original).size() == 2);

  // Altered text is a reconstruction mismatch.
  std::string altered = "Weaknesses:\nFirst point. <sep> Second point changed.";
  CHECK_THROWS_AS(doa::split_marked_text(altered, original),
                  ReconstructionMismatch);
  std::string dropped = "Weaknesses:\nFirst point.";
  CHECK_THROWS_AS(doa::split_marked_text(dropped, original),
                  ReconstructionMismatch);
}

namespace {

/// Fake judge covering the three DoA phases for the running-example review.
std::string running_example_judge(const judge::JudgeRequest& req,
                                  const std::string&) {
  using judge::Phase;
  if (req.phase == Phase::DoaSegmentation) {
    std::string text = req.slots.at("raw_review_text");
    // Mark the four sentences.
    auto insert_after = [&](const std::string& needle) {
      std::size_t pos = text.find(needle);
      REQUIRE(pos != std::string::npos);
      text.insert(pos + needle.size(), " <sep> ");
    };
    insert_after("for each baseline.");
    insert_after("laughably poor.");
    insert_after("less than 50%.");
    return text;
  }
  if (req.phase == Phase::DoaClassification) {
    return R"({"units": [
      {"index": 1, "role": "claim", "aspect": "experiment"},
      {"index": 2, "role": "premise", "aspect": "experiment"},
      {"index": 3, "role": "premise", "aspect": "experiment"},
      {"index": 4, "role": "premise", "aspect": "methodology"}]})";
  }
  return R"({"premises": [
    {"index": 1, "grounding": 0},
    {"index": 2, "grounding": 1},
    {"index": 3, "grounding": 2}]})";
}

ReviewDocument running_example_review() {
  ReviewDocument review;
  review.reviewer_id = "r1";
  review.reviewer_type = "human";
  review.sections["weaknesses"] =
      "3 seeds is too few to get any statistical confidence, especially "
      "without doing independent hyperparameter sweeps for each baseline. "
      "While in the past this has been standard, as a field we continually "
      "have shown that the statistical power of our experiments are laughably "
      "poor. The performance of the proposed goal-conditioned RL algorithm on "
      "the most challenging tasks was less than 50%. QRL assumes "
      "deterministic dynamics of the environment, while TD InfoNCE learns "
      "without such assumption.";
  return review;
}

}  // namespace

TEST_CASE("three-phase pipeline reproduces the running example end to end") {
  auto backend = std::make_shared<testing::FnBackend>(running_example_judge);
  auto store = std::make_shared<judge::ReplayStore>();
  judge::JudgeClient client(backend, store, judge::CacheMode::Record,
                            testing::instant_retries());

  std::vector<ArgumentUnit> units;
  auto result = doa::run_pipeline(client, running_example_review(), &units);
  REQUIRE(result.has_value());
  CHECK(result->total_units == 4);
  CHECK(result->premise_count == 3);
  CHECK(result->doa == doctest::Approx(0.6).epsilon(1e-9));
  REQUIRE(units.size() == 4);
  CHECK(units[0].ordinal == 1);
  CHECK(units[3].ordinal == 4);
  CHECK(units[0].text.find("3 seeds is too few") == 0);
}

TEST_CASE("single-sentence review yields one span") {
  auto backend = std::make_shared<testing::FnBackend>(
      [](const judge::JudgeRequest& req, const std::string&) -> std::string {
        if (req.phase == judge::Phase::DoaSegmentation)
          return req.slots.at("raw_review_text");  // nothing to split
        if (req.phase == judge::Phase::DoaClassification)
          return R"({"units": [{"index": 1, "role": "claim", "aspect": "clarity"}]})";
        return R"({"premises": []})";
      });
  auto store = std::make_shared<judge::ReplayStore>();
  judge::JudgeClient client(backend, store, judge::CacheMode::Record,
                            testing::instant_retries());
  ReviewDocument review;
  review.reviewer_id = "r";
  review.reviewer_type = "human";
  review.sections["weaknesses"] = "The abstract overstates the contribution.";
  auto spans = doa::segment_adus(client, review);
  CHECK(spans.size() == 1);
}

TEST_CASE("classification length mismatch: one cache-bypass re-ask in record mode") {
  int classification_calls = 0;
  auto backend = std::make_shared<testing::FnBackend>(
      [&](const judge::JudgeRequest& req, const std::string&) -> std::string {
        if (req.phase == judge::Phase::DoaClassification) {
          ++classification_calls;
          if (classification_calls == 1)
            return R"({"units": [{"index": 1, "role": "claim", "aspect": "clarity"}]})";
          return R"({"units": [
            {"index": 1, "role": "claim", "aspect": "clarity"},
            {"index": 2, "role": "premise", "aspect": "clarity"}]})";
        }
        return "unused";
      });
  auto store = std::make_shared<judge::ReplayStore>();
  judge::JudgeClient client(backend, store, judge::CacheMode::Record,
                            testing::instant_retries());

  std::vector<std::string> spans = {"First point.", "Second point."};
  auto units = doa::classify_adus(client, spans, "macro");
  REQUIRE(units.size() == 2);
  CHECK(classification_calls == 2);
  CHECK(units[1].role == Role::Premise);

  // In replay mode the mismatch is an error (no re-ask possible).
  auto throwing = std::make_shared<testing::ThrowingBackend>("stub-judge");
  // Poison the cache with the short answer.
  judge::JudgeRequest req{judge::Phase::DoaClassification,
                          doa::classification_slots(spans, "macro"),
                          {}};
  store->put(judge::request_digest(req, "stub-judge"),
             R"({"units": [{"index": 1, "role": "claim", "aspect": "clarity"}]})",
             {});
  judge::JudgeClient replayer(throwing, store, judge::CacheMode::Replay);
  CHECK_THROWS_AS(doa::classify_adus(replayer, spans, "macro"), SchemaViolation);
  CHECK(throwing->calls == 0);
}

TEST_CASE("reviews with empty core sections are rejected up front") {
  ReviewDocument review;
  review.reviewer_id = "r";
  review.reviewer_type = "human";
  review.sections["questions"] = "Only questions here?";
  CHECK_THROWS_AS(doa::segmentation_slots(review), InvalidArgument);
}

TEST_CASE("55-unit replay fixture: record then replay classification at scale") {
  // Synthetic long review: 55 sentences, canned classification of 18 claims
  // and 37 premises.
  std::string weaknesses;
  for (int i = 0; i < 55; ++i)
    weaknesses += "Point number " + std::to_string(i + 1) +
                  " raises a concern about the method. ";

  auto backend = std::make_shared<testing::FnBackend>(
      [](const judge::JudgeRequest& req, const std::string&) -> std::string {
        if (req.phase == judge::Phase::DoaSegmentation) {
          std::string text = req.slots.at("raw_review_text");
          std::string marked;
          std::size_t pos = 0;
          while (pos < text.size()) {
            std::size_t dot = text.find(". ", pos);
            if (dot == std::string::npos) {
              marked += text.substr(pos);
              break;
            }
            marked += text.substr(pos, dot - pos + 1) + " <sep> ";
            pos = dot + 2;
          }
          return marked;
        }
        if (req.phase == judge::Phase::DoaClassification) {
          nlohmann::json spans =
              nlohmann::json::parse(req.slots.at("argument_list"));
          nlohmann::json units = nlohmann::json::array();
          for (std::size_t i = 0; i < spans.size(); ++i)
            units.push_back({{"index", i + 1},
                             // every third unit a claim: 18 claims of 55
                             {"role", i % 3 == 1 ? "claim" : "premise"},
                             {"aspect", "methodology"}});
          return nlohmann::json{{"units", units}}.dump();
        }
        nlohmann::json list =
            nlohmann::json::parse(req.slots.at("premise_list"));
        nlohmann::json premises = nlohmann::json::array();
        for (std::size_t i = 0; i < list.size(); ++i)
          premises.push_back({{"index", i + 1},
                              {"grounding", static_cast<int>(i % 2)}});
        return nlohmann::json{{"premises", premises}}.dump();
      });

  auto dir = std::filesystem::temp_directory_path() /
             ("revq-55-" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  ReviewDocument review;
  review.reviewer_id = "human";
  review.reviewer_type = "human";
  review.sections["weaknesses"] = weaknesses;

  std::vector<ArgumentUnit> recorded_units;
  {
    auto store = std::make_shared<judge::ReplayStore>(dir);
    judge::JudgeClient client(backend, store, judge::CacheMode::Record,
                              testing::instant_retries());
    auto result = doa::run_pipeline(client, review, &recorded_units);
    REQUIRE(result.has_value());
    CHECK(result->total_units == 55);
    CHECK(result->premise_count == 37);
    CHECK(result->total_units - result->premise_count == 18);
  }
  {
    // Replay reproduces the same 55 classified units with no backend calls.
    auto store = std::make_shared<judge::ReplayStore>(dir);
    auto throwing = std::make_shared<testing::ThrowingBackend>("stub-judge");
    judge::JudgeClient client(throwing, store, judge::CacheMode::Replay);
    std::vector<ArgumentUnit> replayed_units;
    auto result = doa::run_pipeline(client, review, &replayed_units);
    REQUIRE(result.has_value());
    CHECK(result->total_units == 55);
    CHECK(throwing->calls == 0);
    REQUIRE(replayed_units.size() == recorded_units.size());
    for (std::size_t i = 0; i < replayed_units.size(); ++i) {
      CHECK(replayed_units[i].role == recorded_units[i].role);
      CHECK(replayed_units[i].grounding == recorded_units[i].grounding);
    }
  }
  std::filesystem::remove_all(dir);
}
