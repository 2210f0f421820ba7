#pragma once

#include <optional>
#include <span>
#include <string>

#include "fwwave/sampler.hpp"
#include "fwwave/types.hpp"

namespace fwwave::variations {

/// Which divisor standardized the centered variation.
struct NormalizationRecord {
    std::string kind;   // "exact_wick" or "asymptotic"
    double mean = 0.0;  // exact centering value
    double sd = 0.0;    // divisor
};

/// Quadratic-variation statistics of one replication.
///   s_raw          mean of squared increments
///   v_centered     s_raw minus the exact mean (model diagonal)
///   f_standardized v_centered / exact Wick standard deviation
///   f_asymptotic   v_centered / asymptotic-constant standard deviation
///                  (NaN when no asymptotic divisor was supplied)
struct VariationStatistic {
    double s_raw = 0.0;
    double v_centered = 0.0;
    double f_standardized = 0.0;
    double f_asymptotic = 0.0;
    NormalizationRecord normalization;
    NormalizationRecord asym_normalization;
};

/// Temporal variation of one increment vector against its model.
/// asym_sd, when given, supplies the asymptotic standardization divisor
/// (typically sigma(h) * n^{-2H-1/2} * Sigma^2/c).
VariationStatistic temporal_variation(std::span<const double> increments,
                                      const sampler::CovarianceModel& model,
                                      std::optional<double> asym_sd = std::nullopt);

/// Rectangular variation; the asymptotic standardization is built in:
/// sd_asym = (Sigma^2/c) * sqrt(N^{-1} M^{1-4 alpha}).
VariationStatistic rect_variation(std::span<const double> increments,
                                  const sampler::CovarianceModel& model);

/// Closed-form E[S_n] = (Sigma^2/c) [ n^{-2H}/4 + ((1-2H)/(1+2H)) n^{-2H-1}/4 ];
/// equals the mean of the temporal model diagonal exactly.
double expected_sn(const HurstParam& h, std::size_t n, const PhysicalParams& params = {});

/// Exact E[S] of the rectangular variation: (Sigma^2/c) * M^{1-2 alpha} / 2.
double expected_rect_sn(const RectGrid& grid, const PhysicalParams& params = {});

/// Asymptotic standard deviation of the rectangular variation,
/// (Sigma^2/c) * sqrt(N^{-1} M^{1-4 alpha}); the exact second moment
/// approaches its square like (1 - 1/(3N))(1 - 1/(4M^2)).
double rect_asymptotic_sd(const RectGrid& grid, const PhysicalParams& params = {});

} // namespace fwwave::variations
