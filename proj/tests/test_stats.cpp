#include <doctest.h>

#include <cmath>
#include <random>

#include "revq/errors.hpp"
#include "revq/stats/stats.hpp"
#include "support/oracles.hpp"

using namespace revq;
using revq::testing::oracle_mann_whitney_exact_p;
using revq::testing::oracle_t_two_tailed_p;
using revq::testing::oracle_wilcoxon_exact_p;

namespace {

stats::PairedSample paired(const std::vector<double>& a,
                           const std::vector<double>& b) {
  return {{}, a, b};
}

}  // namespace

TEST_CASE("wilcoxon: identical samples are degenerate") {
  auto r = stats::wilcoxon_signed_rank(paired({1, 2, 3}, {1, 2, 3}));
  CHECK(r.degenerate);
  CHECK(r.p_value == doctest::Approx(1.0));
  CHECK(r.effect_size == doctest::Approx(0.0));
  CHECK(r.n_effective == 0);
}

TEST_CASE("wilcoxon: one-sided extreme at n=10") {
  std::vector<double> a, b;
  for (int i = 1; i <= 10; ++i) {
    a.push_back(10.0 + i);
    b.push_back(static_cast<double>(i) * 0.1);
  }
  auto r = stats::wilcoxon_signed_rank(paired(a, b));
  CHECK(r.exact);
  CHECK(r.p_value == doctest::Approx(2.0 / 1024.0));
  CHECK(r.p_value < 0.01);
  CHECK(r.effect_size == doctest::Approx(1.0));
}

TEST_CASE("wilcoxon: exact p equals the 2^n enumeration oracle for n <= 12") {
  std::mt19937 rng(20240811);
  std::uniform_int_distribution<int> n_dist(1, 12);
  std::uniform_int_distribution<int> v_dist(-6, 6);
  int checked = 0;
  for (int trial = 0; trial < 250; ++trial) {
    int n = n_dist(rng);
    std::vector<double> a(n), b(n);
    std::vector<double> diffs;
    for (int i = 0; i < n; ++i) {
      a[i] = v_dist(rng);
      b[i] = v_dist(rng);  // integer values force ties regularly
      diffs.push_back(a[i] - b[i]);
    }
    bool all_zero = true;
    for (double d : diffs) all_zero &= (d == 0.0);
    if (all_zero) continue;
    auto r = stats::wilcoxon_signed_rank(paired(a, b));
    REQUIRE(r.exact);
    double want = oracle_wilcoxon_exact_p(diffs);
    CHECK(r.p_value == doctest::Approx(want).epsilon(1e-12));
    ++checked;
  }
  CHECK(checked >= 200);
}

TEST_CASE("wilcoxon: large-n approximation stays in [0,1] and is sane") {
  std::mt19937 rng(7);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<double> a, b;
  for (int i = 0; i < 60; ++i) {
    double base = noise(rng);
    a.push_back(base + 0.1);
    b.push_back(base + noise(rng) * 0.5);
  }
  auto r = stats::wilcoxon_signed_rank(paired(a, b));
  CHECK_FALSE(r.exact);
  CHECK(r.p_value >= 0.0);
  CHECK(r.p_value <= 1.0);
}

TEST_CASE("holm correction: worked example and edge cases") {
  auto adj = stats::holm_correction({0.01, 0.04, 0.03});
  REQUIRE(adj.size() == 3);
  CHECK(adj[0] == doctest::Approx(0.03));
  CHECK(adj[1] == doctest::Approx(0.06));
  CHECK(adj[2] == doctest::Approx(0.06));

  CHECK(stats::holm_correction({0.2}) == std::vector<double>{0.2});
  CHECK(stats::holm_correction({1.0, 1.0}) == std::vector<double>{1.0, 1.0});
  CHECK(stats::holm_correction({}).empty());
  CHECK_THROWS_AS(stats::holm_correction({1.5}), InvalidArgument);
}

TEST_CASE("holm correction properties: dominance, equivariance, idempotence") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t m = 1 + static_cast<std::size_t>(u(rng) * 8);
    std::vector<double> p(m);
    for (auto& x : p) x = u(rng);
    auto adj = stats::holm_correction(p);
    for (std::size_t i = 0; i < m; ++i) {
      CHECK(adj[i] >= p[i]);
      CHECK(adj[i] <= 1.0);
    }
    // Permutation equivariance.
    std::vector<std::size_t> perm(m);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<double> p2(m);
    for (std::size_t i = 0; i < m; ++i) p2[i] = p[perm[i]];
    auto adj2 = stats::holm_correction(p2);
    for (std::size_t i = 0; i < m; ++i)
      CHECK(adj2[i] == doctest::Approx(adj[perm[i]]).epsilon(1e-12));
  }
}

TEST_CASE("pearson: trivial and error cases") {
  std::vector<double> x{1, 2, 3, 5};
  auto same = stats::pearson_with_ttest(x, x);
  REQUIRE(same.has_value());
  CHECK(same->statistic == doctest::Approx(1.0));
  CHECK(same->p_value == doctest::Approx(0.0));

  std::vector<double> neg{-1, -2, -3, -5};
  auto anti = stats::pearson_with_ttest(x, neg);
  REQUIRE(anti.has_value());
  CHECK(anti->statistic == doctest::Approx(-1.0));

  CHECK_FALSE(stats::pearson_with_ttest({1, 1, 1}, {1, 2, 3}).has_value());
  CHECK_FALSE(stats::pearson_with_ttest({1, 2}, {1, 2}).has_value());
}

TEST_CASE("pearson p-values agree with the quadrature oracle to 1e-10") {
  std::mt19937 rng(20240812);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t n = 5 + static_cast<std::size_t>(trial) % 30;
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = noise(rng);
      y[i] = 0.4 * x[i] + noise(rng);
    }
    auto r = stats::pearson_with_ttest(x, y);
    REQUIRE(r.has_value());
    double rr = r->statistic;
    double t = rr * std::sqrt(static_cast<double>(n - 2)) /
               std::sqrt(1.0 - rr * rr);
    double want = oracle_t_two_tailed_p(t, static_cast<double>(n - 2));
    CHECK(std::fabs(r->p_value - want) < 1e-10);
  }
}

TEST_CASE("pearson r is invariant under positive affine maps, flips sign under negation") {
  std::mt19937 rng(5150);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 4 + trial % 16;
    std::vector<double> x(n), y(n), x_affine(n), x_neg(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = noise(rng);
      y[i] = noise(rng) + 0.3 * x[i];
      x_affine[i] = 2.5 * x[i] + 7.0;
      x_neg[i] = -x[i];
    }
    auto base = stats::pearson_with_ttest(x, y);
    auto affine = stats::pearson_with_ttest(x_affine, y);
    auto neg = stats::pearson_with_ttest(x_neg, y);
    REQUIRE(base.has_value());
    REQUIRE(affine.has_value());
    REQUIRE(neg.has_value());
    CHECK(affine->statistic == doctest::Approx(base->statistic).epsilon(1e-9));
    CHECK(neg->statistic == doctest::Approx(-base->statistic).epsilon(1e-9));
  }
}

TEST_CASE("t-distribution CDF path vs quadrature across dof") {
  for (double dof : {1.0, 2.0, 3.0, 7.0, 18.0, 60.0}) {
    for (double t : {0.0, 0.17, 0.9, 1.5, 2.8, 6.0}) {
      double got = stats::student_t_two_tailed_p(t, dof);
      double want = oracle_t_two_tailed_p(t, dof);
      CHECK(std::fabs(got - want) < 1e-10);
    }
  }
}

TEST_CASE("mann-whitney: no shift means p ~ 1") {
  std::vector<double> a{1, 2, 3, 4, 5};
  auto r = stats::mann_whitney_u(a, a);
  CHECK(r.p_value == doctest::Approx(1.0));
  CHECK(r.statistic == doctest::Approx(12.5));
}

TEST_CASE("mann-whitney: disjoint supports at 5/5 give 2/C(10,5)") {
  std::vector<double> a{11, 12, 13, 14, 15};
  std::vector<double> b{1, 2, 3, 4, 5};
  auto r = stats::mann_whitney_u(a, b);
  CHECK(r.exact);
  CHECK(r.p_value == doctest::Approx(2.0 / 252.0));
  CHECK(r.effect_size == doctest::Approx(1.0));
}

TEST_CASE("mann-whitney: exact p matches the permutation oracle (ties included)") {
  std::mt19937 rng(424242);
  std::uniform_int_distribution<int> size_dist(1, 8);
  std::uniform_int_distribution<int> v_dist(0, 5);
  int checked = 0;
  for (int trial = 0; trial < 220; ++trial) {
    std::size_t na = static_cast<std::size_t>(size_dist(rng));
    std::size_t nb = static_cast<std::size_t>(size_dist(rng));
    std::vector<double> a(na), b(nb);
    for (auto& v : a) v = v_dist(rng);
    for (auto& v : b) v = v_dist(rng);
    auto r = stats::mann_whitney_u(a, b);
    REQUIRE(r.exact);
    double want = oracle_mann_whitney_exact_p(a, b);
    CHECK(r.p_value == doctest::Approx(want).epsilon(1e-9));
    ++checked;
  }
  CHECK(checked >= 200);
}

TEST_CASE("mann-whitney: U_a + U_b = n*m") {
  std::mt19937 rng(31337);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t na = 1 + trial % 12, nb = 1 + (trial * 7) % 12;
    std::vector<double> a(na), b(nb);
    for (auto& v : a) v = std::floor(u(rng));
    for (auto& v : b) v = std::floor(u(rng));
    auto r_ab = stats::mann_whitney_u(a, b);
    auto r_ba = stats::mann_whitney_u(b, a);
    CHECK(r_ab.statistic + r_ba.statistic ==
          doctest::Approx(static_cast<double>(na * nb)));
  }
}

TEST_CASE("jsd: identity, symmetry, bounds, known value") {
  std::vector<double> p{0.25, 0.25, 0.25, 0.25};
  CHECK(stats::jensen_shannon_divergence(p, p) == doctest::Approx(0.0));

  std::vector<double> a{1.0, 0.0}, b{0.5, 0.5};
  CHECK(stats::jensen_shannon_divergence(a, b) ==
        doctest::Approx(0.311278).epsilon(1e-4));
  CHECK(stats::jensen_shannon_divergence(a, b) ==
        doctest::Approx(stats::jensen_shannon_divergence(b, a)));

  // Disjoint supports hit the base-2 upper bound.
  CHECK(stats::jensen_shannon_divergence({1, 0}, {0, 1}) == doctest::Approx(1.0));

  CHECK_THROWS_AS(stats::jensen_shannon_divergence({0.5, 0.5}, {0.5, 0.4}),
                  InvalidArgument);
  CHECK_THROWS_AS(stats::jensen_shannon_divergence({0.5, 0.5}, {1.0}),
                  InvalidArgument);
}

TEST_CASE("jsd symmetry and bounds over random distributions") {
  std::mt19937 rng(8080);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t k = 2 + trial % 6;
    std::vector<double> p(k), q(k);
    double sp = 0, sq = 0;
    for (std::size_t i = 0; i < k; ++i) {
      p[i] = u(rng) + 1e-12;
      q[i] = u(rng) + 1e-12;
      sp += p[i];
      sq += q[i];
    }
    for (std::size_t i = 0; i < k; ++i) {
      p[i] /= sp;
      q[i] /= sq;
    }
    double pq = stats::jensen_shannon_divergence(p, q);
    double qp = stats::jensen_shannon_divergence(q, p);
    CHECK(pq == doctest::Approx(qp).epsilon(1e-12));
    CHECK(pq >= 0.0);
    CHECK(pq <= 1.0);
  }
}

TEST_CASE("entropy: uniform, point mass, and the printed aspect row") {
  CHECK(stats::shannon_entropy({0.25, 0.25, 0.25, 0.25}) == doctest::Approx(2.0));
  CHECK(stats::shannon_entropy({1.0, 0.0, 0.0}) == doctest::Approx(0.0));
  // Macro-average aspect row whose reference H value (1.524) is a mean of
  // per-item entropies, not the entropy of the averaged distribution; the
  // direct computation on the row gives ~1.674 bits.
  std::vector<double> human{0.103, 0.508, 0.293, 0.094};
  double h = stats::shannon_entropy({0.103 / 0.998, 0.508 / 0.998,
                                     0.293 / 0.998, 0.094 / 0.998});
  CHECK(h == doctest::Approx(1.6742).epsilon(1e-3));
  CHECK_THROWS_AS(stats::shannon_entropy(human), InvalidArgument);  // sums to 0.998
}
