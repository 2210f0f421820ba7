#pragma once

#include <span>
#include <string>

#include "fwwave/types.hpp"

namespace fwwave::estimators {

/// Point estimate with a plug-in asymptotic confidence interval. When the
/// asymptotic law does not apply (nonnormal regime, externally sourced or
/// refused constants) ci_valid is false and ci_note explains why; the point
/// estimate is always filled.
struct EstimateReport {
    std::string target;        // "H", "c", "p", "q", "c_rect"
    double estimate = 0.0;
    double asymptotic_sd = 0.0;
    bool ci_valid = false;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    std::string ci_note;

    // inputs record
    std::size_t n = 0;
    std::size_t m = 0;
    double alpha = 0.0;
    double h_assumed = 0.0;
    double t_fixed = 0.0;

    /// Stable versioned JSON rendering (17 significant digits).
    std::string to_json() const;
};

/// Hurst estimator from temporal increments over the unit interval:
///   H^ = -(log 4 + log S_N) / (2 log N),  S_N = mean of squared increments.
/// For H^ < 3/4 the plug-in CI comes from the asymptotic law
///   (H - H^) sqrt(N) log N -> Normal(0, 4 sigma^2(H));
/// within 0.02 of 3/4 the CI is kept but flagged near-boundary, and above
/// it is suppressed (nonnormal limit regime).
EstimateReport estimate_hurst(std::span<const double> increments);

/// Drift estimator with known H < 3/4: c^ = 1 / (4 S_N N^{2H}),
/// CI from sqrt(N)(c^ - c) -> Normal(0, 16 c^2 sigma^2(H)).
EstimateReport estimate_c(std::span<const double> increments, const HurstParam& h_known);

/// Same statistic targeting p = c / Sigma^2 when the volatility is unknown;
/// identical numerics, different label and interpretation.
EstimateReport estimate_p(std::span<const double> increments, const HurstParam& h_known);

/// Spatial estimator of q = c^2 / Sigma^2 from increments of one time slice:
///   q^ = (t/2) / (N^{2H} S_N^{space}).
/// The CI (variance constant 2 q^2) is only emitted at H = 1/2 and is
/// flagged as externally sourced.
EstimateReport estimate_q(std::span<const double> spatial_increments,
                          const HurstParam& h_known, double t);

/// Rectangular drift estimator at H = 1/2 on an admissible grid:
///   c~ = M^{1 - 2 alpha} / (2 S),  S = mean of squared rectangular
/// increments; CI from sqrt(MN)(c~ - c) -> Normal(0, 4 c^2). The report is
/// flagged when the grid is post-hoc inadmissible for the estimated c~.
EstimateReport estimate_c_rect(std::span<const double> rect_increments, const RectGrid& grid);

/// True iff the temporal laws of (c1, s1) and (c2, s2) coincide, i.e.
/// s1 c1^{-1/2} == s2 c2^{-1/2} within 1e-12 relative.
bool identifiability_check(double c1, double sigma1, double c2, double sigma2);

} // namespace fwwave::estimators
