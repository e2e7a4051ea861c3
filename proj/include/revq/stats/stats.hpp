#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace revq::stats {

/// Paired per-sample metric values for two systems.
struct PairedSample {
  std::vector<std::string> labels;  // optional sample ids, may be empty
  std::vector<double> a;
  std::vector<double> b;
};

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  double effect_size = 0.0;  // rank-biserial r
  std::size_t n_effective = 0;
  bool degenerate = false;  // e.g. all-zero differences
  bool exact = false;       // p from exact enumeration rather than approximation
};

/// Two-sided Wilcoxon signed-rank test on paired data.
///
/// Zero differences are dropped; tied absolute differences receive mid-ranks.
/// For n_effective <= 25 the p-value is exact under the sign-flip null
/// (two-sided tail: P(|W - T/2| >= |w - T/2|)); above that a normal
/// approximation with tie and continuity correction is used.
/// Effect size is the rank-biserial correlation (W+ - W-)/(W+ + W-).
TestResult wilcoxon_signed_rank(const PairedSample& sample);

/// Holm-Bonferroni step-down correction. Output is in input order,
/// elementwise >= input, monotone after sorting, capped at 1.
std::vector<double> holm_correction(const std::vector<double>& p_values);

/// Pearson correlation with the two-tailed t-test on n-2 degrees of freedom.
/// Requires n >= 3 and both vectors non-constant; otherwise nullopt.
std::optional<TestResult> pearson_with_ttest(const std::vector<double>& x,
                                             const std::vector<double>& y);

/// Two-sided unpaired Mann-Whitney U test with mid-ranks for ties.
/// Exact enumeration when the smaller sample has <= 8 elements (and the
/// combination count stays tractable), tie-corrected normal approximation
/// otherwise. statistic is U of the first sample.
TestResult mann_whitney_u(const std::vector<double>& a,
                          const std::vector<double>& b);

/// Base-2 Jensen-Shannon divergence between two probability vectors,
/// bounded to [0,1], with the 0*log0 = 0 convention.
double jensen_shannon_divergence(const std::vector<double>& p,
                                 const std::vector<double>& q);

/// Shannon entropy in bits of a probability vector.
double shannon_entropy(const std::vector<double>& p);

/// Regularized incomplete beta function I_x(a, b), continued-fraction
/// evaluation. Exposed because the t-distribution CDF is defined through it.
double regularized_incomplete_beta(double a, double b, double x);

/// Two-tailed p-value of a Student-t statistic with `dof` degrees of freedom.
double student_t_two_tailed_p(double t, double dof);

}  // namespace revq::stats
