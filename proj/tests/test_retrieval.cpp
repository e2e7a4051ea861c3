#include <doctest.h>

#include <random>
#include <set>

#include "revq/errors.hpp"
#include "revq/retrieval/client.hpp"
#include "revq/retrieval/pool.hpp"
#include "support/oracles.hpp"
#include "support/stubs.hpp"

using namespace revq;
using retrieval::CandidateWork;

namespace {

CandidateWork make(std::string id, std::string title, std::string abstract,
                   int year, double relevance) {
  CandidateWork c;
  c.id = std::move(id);
  c.title = std::move(title);
  c.abstract = std::move(abstract);
  c.year = year;
  c.relevance = relevance;
  return c;
}

std::vector<CandidateWork> random_pool(std::mt19937& rng, std::size_t n) {
  static const char* words[] = {"graph",  "bandit", "optimal", "neural",
                                "policy", "sample", "bound",   "robust",
                                "kernel", "sparse"};
  std::uniform_int_distribution<int> w(0, 9);
  std::uniform_int_distribution<int> year(2015, 2030);
  std::uniform_real_distribution<double> rel(0.0, 2.0);
  std::vector<CandidateWork> pool;
  for (std::size_t i = 0; i < n; ++i) {
    std::string title = std::string(words[w(rng)]) + " " + words[w(rng)] + " " +
                        words[w(rng)];
    std::string abstract = std::string("We study ") + words[w(rng)] + " " +
                           words[w(rng)] + " methods for " + words[w(rng)] +
                           " problems with " + words[w(rng)] + " guarantees.";
    pool.push_back(make("c" + std::to_string(i), title, abstract, year(rng),
                        rel(rng)));
  }
  return pool;
}

}  // namespace

TEST_CASE("build_queries: core task first, contributions in extraction order") {
  retrieval::ExtractionAnchors anchors;
  anchors.core_task = "knowledge utilization in MLLMs";
  anchors.contribution_names = {"adaptive logits fusion", "attention reallocation"};
  auto queries = retrieval::build_queries(anchors);
  REQUIRE(queries.size() == 3);
  CHECK(queries[0].text == "knowledge utilization in MLLMs");
  CHECK(queries[1].text == "adaptive logits fusion");
  CHECK(queries[2].text == "attention reallocation");
  CHECK(queries[0].limit == 20);

  anchors.contribution_names.clear();
  CHECK(retrieval::build_queries(anchors).size() == 1);

  // Determinism: identical extraction gives identical query lists.
  anchors.contribution_names = {"a", "b"};
  CHECK(retrieval::build_queries(anchors) == retrieval::build_queries(anchors));

  retrieval::ExtractionAnchors empty;
  CHECK_THROWS_AS(retrieval::build_queries(empty), InvalidArgument);
}

TEST_CASE("filter_candidates: temporal rule, editorials, empty abstracts") {
  auto ok = make("a", "A solid method", "We propose things.", 2024, 1.0);
  auto late = make("b", "Future work", "From the future.", 2026, 1.0);
  auto editorial = make("c", "Editorial: on reviewing", "Musings.", 2020, 1.0);
  auto empty_abs = make("d", "No abstract", "   ", 2020, 1.0);
  auto typed = make("e", "Fine title", "Real abstract.", 2020, 1.0);
  typed.publication_types = {"Editorial"};

  auto out = retrieval::filter_candidates({ok, late, editorial, empty_abs, typed},
                                          2025);
  REQUIRE(out.size() == 1);
  CHECK(out[0].id == "a");

  // Boundary year is kept; no-op case returns input unchanged.
  auto same_year = make("f", "This year", "Fresh.", 2025, 1.0);
  auto out2 = retrieval::filter_candidates({ok, same_year}, 2025);
  CHECK(out2.size() == 2);
}

TEST_CASE("filter soundness over randomized fixtures") {
  std::mt19937 rng(160);
  for (int trial = 0; trial < 200; ++trial) {
    auto pool = random_pool(rng, 12);
    int submission_year = 2024;
    auto out = retrieval::filter_candidates(pool, submission_year);
    for (const auto& c : out) CHECK(c.year <= submission_year);
  }
}

TEST_CASE("dedup: byte-identical pair collapses at 0.96") {
  auto a = make("a", "Graph neural ranking", "We rank graphs with networks.",
                2020, 0.9);
  auto b = a;
  b.id = "b";
  b.relevance = 0.5;
  auto out = retrieval::dedup_candidates({a, b}, 0.96);
  REQUIRE(out.size() == 1);
  CHECK(out[0].id == "a");  // higher relevance retained
}

TEST_CASE("dedup: one-character title edit still collapses; unrelated pair survives") {
  std::string abstract =
      "We propose a preconditioned optimizer for domain generalization that "
      "balances per-parameter updates using a one-step generalization ratio "
      "computed from held-out gradients across training domains.";
  auto a = make("a", "Preconditioned optimizers for domain generalization",
                abstract, 2023, 1.0);
  auto b = make("b", "Preconditioned optimizerz for domain generalization",
                abstract, 2023, 0.4);
  double sim = revq::testing::oracle_trigram_cosine(
      a.title + " " + a.abstract, b.title + " " + b.abstract);
  CHECK(sim >= 0.96);
  auto out = retrieval::dedup_candidates({a, b}, 0.96);
  REQUIRE(out.size() == 1);
  CHECK(out[0].id == "a");

  auto c = make("c", "Sparse recovery with side information",
                "Compressed sensing under structured priors and side channels.",
                2021, 0.2);
  double sim_ac = revq::testing::oracle_trigram_cosine(
      a.title + " " + a.abstract, c.title + " " + c.abstract);
  CHECK(sim_ac < 0.5);
  CHECK(retrieval::dedup_candidates({a, c}, 0.96).size() == 2);
}

TEST_CASE("dedup idempotence and order-independence") {
  std::mt19937 rng(1234);
  for (int trial = 0; trial < 200; ++trial) {
    auto pool = random_pool(rng, 8);
    // Distinct relevances so the retained set is order-independent.
    for (std::size_t i = 0; i < pool.size(); ++i)
      pool[i].relevance = 1.0 + 0.01 * static_cast<double>(i);
    auto once = retrieval::dedup_candidates(pool, 0.8);
    auto twice = retrieval::dedup_candidates(once, 0.8);
    CHECK(once == twice);

    auto shuffled = pool;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    auto from_shuffled = retrieval::dedup_candidates(shuffled, 0.8);
    CHECK(once == from_shuffled);
  }
}

TEST_CASE("mmr: trivial cases") {
  auto a = make("a", "first title", "completely different abstract one.", 2020, 1.0);
  auto b = make("b", "second thing", "another unrelated text body here.", 2020, 0.5);
  auto out = retrieval::mmr_select({a, b}, 30, 0.5);
  CHECK(out.size() == 2);  // pool <= k returns the whole pool

  // lambda = 1 reduces to pure relevance ordering.
  std::mt19937 rng(77);
  auto pool = random_pool(rng, 6);
  auto by_rel = retrieval::mmr_select(pool, 6, 1.0);
  for (std::size_t i = 1; i < by_rel.size(); ++i)
    CHECK(by_rel[i - 1].relevance >= by_rel[i].relevance);
}

TEST_CASE("mmr matches the exhaustive greedy oracle for lambda in {0, 0.5, 1}") {
  std::mt19937 rng(31415);
  for (int trial = 0; trial < 120; ++trial) {
    auto pool = random_pool(rng, 5);
    for (double lambda : {0.0, 0.5, 1.0}) {
      auto got = retrieval::mmr_select(pool, 3, lambda);
      auto want = revq::testing::oracle_mmr(pool, 3, lambda);
      REQUIRE(got.size() == want.size());
      for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i].id == want[i].id);
    }
  }
}

TEST_CASE("mmr output is duplicate-free, within the pool, of size min(k,n)") {
  std::mt19937 rng(999);
  for (int trial = 0; trial < 200; ++trial) {
    auto pool = random_pool(rng, 1 + trial % 9);
    std::size_t k = 1 + trial % 6;
    auto out = retrieval::mmr_select(pool, k, 0.5);
    CHECK(out.size() == std::min(k, pool.size()));
    std::set<std::string> seen;
    for (const auto& c : out) {
      CHECK(seen.insert(c.id).second);
      CHECK(std::any_of(pool.begin(), pool.end(),
                        [&](const CandidateWork& p) { return p.id == c.id; }));
    }
  }
}

TEST_CASE("merge_by_id keeps max relevance, first-appearance order") {
  auto a1 = make("a", "t", "x", 2020, 0.5);
  auto a2 = make("a", "t", "x", 2020, 0.9);
  auto b = make("b", "u", "y", 2020, 0.7);
  auto merged = retrieval::merge_by_id({{a1, b}, {a2}});
  REQUIRE(merged.size() == 2);
  CHECK(merged[0].id == "a");
  CHECK(merged[0].relevance == doctest::Approx(0.9));
}

TEST_CASE("scholar client: response parsing, cache policy, replay hermeticity") {
  std::string body = R"({"data": [
    {"paperId": "p1", "title": "First", "abstract": "A.", "year": 2020},
    {"paperId": "p2", "title": "Second", "abstract": "B.", "year": 2021, "score": 3.5}
  ]})";

  auto parsed = retrieval::ScholarClient::parse_response(body);
  REQUIRE(parsed.size() == 2);
  CHECK(parsed[0].relevance == doctest::Approx(1.0));  // reciprocal rank
  CHECK(parsed[1].relevance == doctest::Approx(3.5));  // API score wins

  retrieval::SearchQuery query{.text = "graph bandits", .limit = 20};

  auto transport = std::make_shared<testing::FnTransport>(
      [&](const retrieval::SearchQuery&) { return body; });
  auto store = std::make_shared<judge::ReplayStore>();

  retrieval::ScholarClient recorder(transport, store, judge::CacheMode::Record);
  auto first = recorder.search(query);
  CHECK(transport->calls == 1);
  auto second = recorder.search(query);  // cache hit, no second call
  CHECK(transport->calls == 1);
  CHECK(first == second);

  auto throwing = std::make_shared<testing::ThrowingTransport>();
  retrieval::ScholarClient replayer(throwing, store, judge::CacheMode::Replay);
  CHECK(replayer.search(query) == first);
  CHECK(throwing->calls == 0);

  retrieval::SearchQuery missing{.text = "never recorded", .limit = 20};
  CHECK_THROWS_AS(replayer.search(missing), ReplayMissError);
  CHECK(throwing->calls == 0);
}
