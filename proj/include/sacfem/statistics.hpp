#pragma once

// Monte Carlo summaries and convergence-order regression.
//
// Sums use a fixed pairwise tree over the sample index, so a result depends
// only on the samples and their order, never on how they were produced.

#include <cstddef>
#include <span>
#include <vector>

namespace sacfem {

/// 97.5% standard normal quantile; halfwidths are 95% two-sided.
inline constexpr double kNormalQuantile975 = 1.959963984540054;

/// Pairwise (binary tree) sum in index order.
double tree_sum(std::span<const double> values);

struct SampleSummary {
    std::size_t count = 0;
    double mean = 0.0;
    double variance = 0.0;  // unbiased
    double standard_error = 0.0;
    double halfwidth = 0.0;
};

/// Mean, variance and 95% halfwidth; variance is 0 for fewer than two samples.
SampleSummary summarize(std::span<const double> values);

struct Estimate {
    double value = 0.0;
    double halfwidth = 0.0;
    std::size_t samples = 0;
};

/// sqrt(E[s]) from samples s of a squared distance, with delta-method halfwidth.
Estimate rms_estimate(std::span<const double> squared);
/// |E[d]| from paired differences d.
Estimate abs_mean_estimate(std::span<const double> differences);

struct OrderFit {
    double slope = 0.0;
    double intercept = 0.0;
    /// Root-mean-square residual of the log-log fit.
    double residual = 0.0;
    /// log(e_i / e_{i+1}) / log(h_i / h_{i+1}), one per consecutive pair.
    std::vector<double> pairwise;
};

/// Least-squares slope of log e against log h. Throws for fewer than two
/// points, mismatched lengths, or nonpositive h or e.
OrderFit fit_order(std::span<const double> h, std::span<const double> e);

}  // namespace sacfem
