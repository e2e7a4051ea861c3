#include "revq/stats/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

#include "revq/errors.hpp"

namespace revq::stats {

namespace {

constexpr std::size_t kWilcoxonExactLimit = 25;
constexpr std::size_t kMannWhitneyExactMin = 8;
constexpr double kMannWhitneyExactBudget = 3.0e7;  // max combinations enumerated

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// Mid-ranks of |values| (1-based); ties share the average rank.
std::vector<double> midranks(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

TestResult wilcoxon_signed_rank(const PairedSample& sample) {
  if (sample.a.size() != sample.b.size())
    throw InvalidArgument("paired sample vectors must have equal length");
  if (sample.a.empty()) throw InvalidArgument("paired sample is empty");

  std::vector<double> diffs;
  diffs.reserve(sample.a.size());
  for (std::size_t i = 0; i < sample.a.size(); ++i) {
    double d = sample.a[i] - sample.b[i];
    if (d != 0.0) diffs.push_back(d);
  }

  TestResult res;
  res.n_effective = diffs.size();
  if (diffs.empty()) {
    res.statistic = 0.0;
    res.p_value = 1.0;
    res.effect_size = 0.0;
    res.degenerate = true;
    return res;
  }

  std::vector<double> abs_d(diffs.size());
  std::transform(diffs.begin(), diffs.end(), abs_d.begin(),
                 [](double d) { return std::fabs(d); });
  std::vector<double> ranks = midranks(abs_d);

  double w_plus = 0.0, w_minus = 0.0;
  for (std::size_t i = 0; i < diffs.size(); ++i) {
    if (diffs[i] > 0.0)
      w_plus += ranks[i];
    else
      w_minus += ranks[i];
  }
  const double total = w_plus + w_minus;  // = n(n+1)/2
  res.statistic = std::min(w_plus, w_minus);
  res.effect_size = (w_plus - w_minus) / total;

  const std::size_t n = diffs.size();
  if (n <= kWilcoxonExactLimit) {
    // Exact sign-flip null. Mid-ranks are half-integers, so work in units of
    // 2*rank to stay integral. The distribution of 2*W+ is computed by DP
    // over sign assignments; the two-sided tail is symmetric about T.
    std::vector<std::int64_t> r2(n);
    std::int64_t sum2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
      r2[i] = static_cast<std::int64_t>(std::llround(ranks[i] * 2.0));
      sum2 += r2[i];
    }
    std::vector<double> pmf(static_cast<std::size_t>(sum2) + 1, 0.0);
    pmf[0] = 1.0;
    std::int64_t reach = 0;
    for (std::size_t i = 0; i < n; ++i) {
      reach += r2[i];
      for (std::int64_t s = reach; s >= r2[i]; --s)
        pmf[static_cast<std::size_t>(s)] +=
            pmf[static_cast<std::size_t>(s - r2[i])];
    }
    const double denom = std::ldexp(1.0, static_cast<int>(n));  // 2^n
    const std::int64_t w2 = static_cast<std::int64_t>(std::llround(w_plus * 2.0));
    // |2W - T| >= |2w - T|, i.e. both tails at the observed distance.
    const std::int64_t dist = std::llabs(2 * w2 - sum2);
    double count = 0.0;
    for (std::int64_t s = 0; s <= sum2; ++s)
      if (std::llabs(2 * s - sum2) >= dist) count += pmf[static_cast<std::size_t>(s)];
    res.p_value = count / denom;
    res.exact = true;
  } else {
    // Normal approximation. Var(W+) = sum(r_i^2)/4 under random signs; with
    // mid-ranks this already carries the tie correction -sum(t^3-t)/48.
    double mean = total / 2.0;
    double var = 0.0;
    for (double r : ranks) var += r * r;
    var /= 4.0;
    double delta = w_plus - mean;
    double cc = delta > 0 ? -0.5 : (delta < 0 ? 0.5 : 0.0);
    double z = var > 0 ? (delta + cc) / std::sqrt(var) : 0.0;
    res.p_value = std::min(1.0, 2.0 * normal_cdf(-std::fabs(z)));
  }
  return res;
}

std::vector<double> holm_correction(const std::vector<double>& p_values) {
  const std::size_t m = p_values.size();
  for (double p : p_values)
    if (p < 0.0 || p > 1.0) throw InvalidArgument("p-value outside [0,1]");

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return p_values[i] < p_values[j];
  });

  std::vector<double> adjusted(m, 0.0);
  double running_max = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double scaled = p_values[order[i]] * static_cast<double>(m - i);
    running_max = std::max(running_max, scaled);
    adjusted[order[i]] = std::min(1.0, running_max);
  }
  return adjusted;
}

std::optional<TestResult> pearson_with_ttest(const std::vector<double>& x,
                                             const std::vector<double>& y) {
  if (x.size() != y.size()) throw InvalidArgument("vectors must have equal length");
  const std::size_t n = x.size();
  if (n < 3) return std::nullopt;

  double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;  // constant vector

  double r = sxy / (std::sqrt(sxx) * std::sqrt(syy));
  r = std::clamp(r, -1.0, 1.0);

  TestResult res;
  res.statistic = r;
  res.effect_size = r;
  res.n_effective = n;
  res.exact = false;
  const double dof = static_cast<double>(n - 2);
  if (std::fabs(r) >= 1.0) {
    res.p_value = 0.0;
  } else {
    double t = r * std::sqrt(dof) / std::sqrt(1.0 - r * r);
    res.p_value = student_t_two_tailed_p(t, dof);
  }
  return res;
}

TestResult mann_whitney_u(const std::vector<double>& a,
                          const std::vector<double>& b) {
  if (a.empty() || b.empty()) throw InvalidArgument("samples must be non-empty");
  const std::size_t na = a.size(), nb = b.size(), n = na + nb;

  std::vector<double> pooled;
  pooled.reserve(n);
  pooled.insert(pooled.end(), a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  std::vector<double> ranks = midranks(pooled);

  double rank_sum_a = 0.0;
  for (std::size_t i = 0; i < na; ++i) rank_sum_a += ranks[i];
  const double u_a = rank_sum_a - static_cast<double>(na) * (na + 1) / 2.0;
  const double nm = static_cast<double>(na) * static_cast<double>(nb);
  const double mu = nm / 2.0;

  TestResult res;
  res.statistic = u_a;
  res.effect_size = 2.0 * u_a / nm - 1.0;  // rank-biserial
  res.n_effective = n;

  auto comb_count = [](std::size_t nn, std::size_t kk) {
    double c = 1.0;
    for (std::size_t i = 1; i <= kk; ++i)
      c *= static_cast<double>(nn - kk + i) / static_cast<double>(i);
    return c;
  };

  const std::size_t k = std::min(na, nb);
  if (k <= kMannWhitneyExactMin && comb_count(n, k) <= kMannWhitneyExactBudget) {
    // Enumerate every assignment of the pooled mid-ranks to the smaller
    // sample; the permutation distribution of U is symmetric about nm/2.
    const double dist = std::fabs(u_a - mu);
    std::vector<std::size_t> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    double hits = 0.0, total = 0.0;
    const double small_offset = static_cast<double>(k) * (k + 1) / 2.0;
    while (true) {
      double rs = 0.0;
      for (std::size_t i : idx) rs += ranks[i];
      double u_small = rs - small_offset;
      // U for the first sample under this assignment:
      double u = (k == na) ? u_small : nm - u_small;
      if (std::fabs(u - mu) >= dist - 1e-9) hits += 1.0;
      total += 1.0;
      // next combination
      std::size_t i = k;
      while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    res.p_value = hits / total;
    res.exact = true;
  } else {
    // Tie-corrected normal approximation with continuity correction.
    std::vector<double> sorted(pooled);
    std::sort(sorted.begin(), sorted.end());
    double tie_term = 0.0;
    std::size_t i = 0;
    while (i < n) {
      std::size_t j = i;
      while (j + 1 < n && sorted[j + 1] == sorted[i]) ++j;
      double t = static_cast<double>(j - i + 1);
      tie_term += t * t * t - t;
      i = j + 1;
    }
    double var = nm / 12.0 *
                 (static_cast<double>(n + 1) -
                  tie_term / (static_cast<double>(n) * (n - 1)));
    double delta = u_a - mu;
    double cc = delta > 0 ? -0.5 : (delta < 0 ? 0.5 : 0.0);
    double z = var > 0 ? (delta + cc) / std::sqrt(var) : 0.0;
    res.p_value = std::min(1.0, 2.0 * normal_cdf(-std::fabs(z)));
  }
  return res;
}

namespace {

void check_probability_vector(const std::vector<double>& p) {
  if (p.empty()) throw InvalidArgument("empty probability vector");
  double sum = 0.0;
  for (double v : p) {
    if (v < 0.0) throw InvalidArgument("negative probability");
    sum += v;
  }
  if (std::fabs(sum - 1.0) > 1e-9)
    throw InvalidArgument("probability vector does not sum to 1");
}

}  // namespace

double jensen_shannon_divergence(const std::vector<double>& p,
                                 const std::vector<double>& q) {
  if (p.size() != q.size()) throw InvalidArgument("dimension mismatch");
  check_probability_vector(p);
  check_probability_vector(q);

  double jsd = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    double m = 0.5 * (p[i] + q[i]);
    if (p[i] > 0.0) jsd += 0.5 * p[i] * std::log2(p[i] / m);
    if (q[i] > 0.0) jsd += 0.5 * q[i] * std::log2(q[i] / m);
  }
  return std::clamp(jsd, 0.0, 1.0);
}

double shannon_entropy(const std::vector<double>& p) {
  check_probability_vector(p);
  double h = 0.0;
  for (double v : p)
    if (v > 0.0) h -= v * std::log2(v);
  return h;
}

double regularized_incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;

  // ln B(a,b) via lgamma.
  const double ln_beta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  const double front = std::exp(a * std::log(x) + b * std::log1p(-x) - ln_beta);

  // Use the symmetry I_x(a,b) = 1 - I_{1-x}(b,a) to keep the continued
  // fraction in its fast-converging region.
  if (x > (a + 1.0) / (a + b + 2.0))
    return 1.0 - regularized_incomplete_beta(b, a, 1.0 - x);

  // Lentz's algorithm for the continued fraction.
  const double tiny = std::numeric_limits<double>::min() * 1e10;
  double c = 1.0;
  double d = 1.0 - (a + b) * x / (a + 1.0);
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double f = d;
  for (int m = 1; m <= 500; ++m) {
    double dm = static_cast<double>(m);
    // even step
    double num = dm * (b - dm) * x / ((a + 2.0 * dm - 1.0) * (a + 2.0 * dm));
    d = 1.0 + num * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + num / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    f *= d * c;
    // odd step
    num = -(a + dm) * (a + b + dm) * x / ((a + 2.0 * dm) * (a + 2.0 * dm + 1.0));
    d = 1.0 + num * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + num / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double delta = d * c;
    f *= delta;
    if (std::fabs(delta - 1.0) < 1e-15) break;
  }
  return front * f / a;
}

double student_t_two_tailed_p(double t, double dof) {
  if (dof <= 0.0) throw InvalidArgument("degrees of freedom must be positive");
  if (!std::isfinite(t)) return 0.0;
  // P(|T| > t) = I_{dof/(dof+t^2)}(dof/2, 1/2)
  double x = dof / (dof + t * t);
  return std::clamp(regularized_incomplete_beta(dof / 2.0, 0.5, x), 0.0, 1.0);
}

}  // namespace revq::stats
