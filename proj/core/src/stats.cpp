#include "fwwave/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fwwave::stats {

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x * 0.7071067811865475244);
}

double ks_statistic(std::span<const double> samples) {
    if (samples.empty()) throw std::invalid_argument("ks_statistic: empty sample");
    std::vector<double> xs(samples.begin(), samples.end());
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double F = normal_cdf(xs[i]);
        d = std::max(d, std::abs(F - static_cast<double>(i + 1) / n));
        d = std::max(d, std::abs(F - static_cast<double>(i) / n));
    }
    return d;
}

double ks_critical_value_1pct(std::size_t n) {
    return 1.63 / std::sqrt(static_cast<double>(n));
}

std::vector<double> empirical_cumulants(std::span<const double> samples, int max_order) {
    if (max_order < 2 || max_order > 4)
        throw std::invalid_argument("empirical_cumulants: max_order must be in 2..4");
    const std::size_t n = samples.size();
    if (n < 10) throw std::invalid_argument("empirical_cumulants: need at least 10 samples");
    const double dn = static_cast<double>(n);
    double mean = 0.0;
    for (double v : samples) mean += v;
    mean /= dn;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : samples) {
        const double d = v - mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= dn;
    m3 /= dn;
    m4 /= dn;
    std::vector<double> out;
    out.push_back(mean);
    out.push_back(dn / (dn - 1.0) * m2);
    if (max_order >= 3) out.push_back(dn * dn / ((dn - 1.0) * (dn - 2.0)) * m3);
    if (max_order >= 4)
        out.push_back(dn * dn *
                      ((dn + 1.0) * m4 - 3.0 * (dn - 1.0) * m2 * m2) /
                      ((dn - 1.0) * (dn - 2.0) * (dn - 3.0)));
    return out;
}

MomentSummary summarize(std::span<const double> samples) {
    if (samples.empty()) throw std::invalid_argument("summarize: empty sample");
    const double dn = static_cast<double>(samples.size());
    double mean = 0.0;
    for (double v : samples) mean += v;
    mean /= dn;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : samples) {
        const double d = v - mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= dn;
    m3 /= dn;
    m4 /= dn;
    MomentSummary out;
    out.mean = mean;
    out.variance = samples.size() > 1 ? m2 * dn / (dn - 1.0) : 0.0;
    out.skewness = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
    out.ex_kurtosis = m2 > 0.0 ? m4 / (m2 * m2) - 3.0 : 0.0;
    return out;
}

Histogram freedman_diaconis(std::span<const double> samples) {
    if (samples.empty()) throw std::invalid_argument("freedman_diaconis: empty sample");
    std::vector<double> xs(samples.begin(), samples.end());
    std::sort(xs.begin(), xs.end());
    const std::size_t n = xs.size();
    const double lo = xs.front(), hi = xs.back();
    auto quantile = [&](double p) {
        const double pos = p * static_cast<double>(n - 1);
        const std::size_t i = static_cast<std::size_t>(pos);
        const double frac = pos - static_cast<double>(i);
        return i + 1 < n ? xs[i] * (1.0 - frac) + xs[i + 1] * frac : xs[i];
    };
    const double iqr = quantile(0.75) - quantile(0.25);
    const double width = 2.0 * iqr / std::cbrt(static_cast<double>(n));
    Histogram out;
    if (!(width > 0.0) || hi <= lo) {
        out.edges = {lo, std::nextafter(hi, hi + 1.0)};
        out.counts = {n};
        return out;
    }
    const std::size_t bins = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil((hi - lo) / width)));
    out.edges.resize(bins + 1);
    for (std::size_t b = 0; b <= bins; ++b)
        out.edges[b] = lo + (hi - lo) * static_cast<double>(b) / static_cast<double>(bins);
    out.counts.assign(bins, 0);
    for (double v : xs) {
        std::size_t b = static_cast<std::size_t>((v - lo) / (hi - lo) * static_cast<double>(bins));
        if (b >= bins) b = bins - 1; // right edge inclusive
        ++out.counts[b];
    }
    return out;
}

} // namespace fwwave::stats
