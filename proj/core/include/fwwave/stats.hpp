#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fwwave::stats {

double normal_cdf(double x);

/// Sup distance between the empirical CDF of samples and the standard
/// normal CDF. Throws on empty input.
double ks_statistic(std::span<const double> samples);

/// Asymptotic critical value d_crit = c(level)/sqrt(n); 1.63 at the 1% level.
double ks_critical_value_1pct(std::size_t n);

/// Unbiased cumulant estimators (k-statistics) of orders 1..max_order,
/// max_order in 2..4. Requires at least 10 samples.
std::vector<double> empirical_cumulants(std::span<const double> samples, int max_order);

struct MomentSummary {
    double mean = 0.0;
    double variance = 0.0;    // unbiased
    double skewness = 0.0;    // m3 / m2^{3/2}
    double ex_kurtosis = 0.0; // m4 / m2^2 - 3
};

/// Two-pass central moments; deterministic summation order.
MomentSummary summarize(std::span<const double> samples);

struct Histogram {
    std::vector<double> edges;        // size bins + 1
    std::vector<std::size_t> counts;  // size bins
};

/// Freedman-Diaconis binning on the realized sample; degenerate samples
/// collapse to a single bin.
Histogram freedman_diaconis(std::span<const double> samples);

} // namespace fwwave::stats
