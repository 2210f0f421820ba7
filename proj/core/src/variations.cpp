#include "fwwave/variations.hpp"

#include <cmath>
#include <limits>

namespace fwwave::variations {

namespace {

double mean_of_squares(std::span<const double> x) {
    double acc = 0.0;
    for (double v : x) acc += v * v;
    return acc / static_cast<double>(x.size());
}

} // namespace

VariationStatistic temporal_variation(std::span<const double> increments,
                                      const sampler::CovarianceModel& model,
                                      std::optional<double> asym_sd) {
    const std::size_t n = increments.size();
    if (n == 0 || static_cast<Eigen::Index>(n) != model.dim())
        throw std::invalid_argument("temporal_variation: increment count must equal model dim");
    VariationStatistic out;
    out.s_raw = mean_of_squares(increments);
    const double mean = model.matrix().diagonal().mean();
    out.v_centered = out.s_raw - mean;
    const double sd = std::sqrt(sampler::wick_second_moment(model, static_cast<double>(n)));
    out.f_standardized = out.v_centered / sd;
    out.normalization = {"exact_wick", mean, sd};
    if (asym_sd) {
        out.f_asymptotic = out.v_centered / *asym_sd;
        out.asym_normalization = {"asymptotic", mean, *asym_sd};
    } else {
        out.f_asymptotic = std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

VariationStatistic rect_variation(std::span<const double> increments,
                                  const sampler::CovarianceModel& model) {
    const std::size_t nm = increments.size();
    if (nm == 0 || static_cast<Eigen::Index>(nm) != model.dim())
        throw std::invalid_argument("rect_variation: increment count must equal model dim");
    const auto& meta = model.meta();
    if (meta.kind != sampler::ModelKind::rectangular)
        throw std::invalid_argument("rect_variation: model is not rectangular");
    VariationStatistic out;
    out.s_raw = mean_of_squares(increments);
    const double mean = model.matrix().diagonal().mean();
    out.v_centered = out.s_raw - mean;
    const double sd = std::sqrt(sampler::wick_second_moment(model, static_cast<double>(nm)));
    out.f_standardized = out.v_centered / sd;
    out.normalization = {"exact_wick", mean, sd};
    RectGrid grid{meta.n, meta.m, meta.alpha};
    PhysicalParams params{meta.c, meta.sigma_vol};
    const double asd = rect_asymptotic_sd(grid, params);
    out.f_asymptotic = out.v_centered / asd;
    out.asym_normalization = {"asymptotic", mean, asd};
    return out;
}

double expected_sn(const HurstParam& h, std::size_t n, const PhysicalParams& params) {
    params.validate();
    if (n == 0) throw std::domain_error("expected_sn: n must be >= 1");
    const double H = h.value();
    const double dn = static_cast<double>(n);
    const double base = 0.25 * std::pow(dn, -2.0 * H) +
                        0.25 * (1.0 - 2.0 * H) / (1.0 + 2.0 * H) * std::pow(dn, -2.0 * H - 1.0);
    return params.temporal_scale() * base;
}

double expected_rect_sn(const RectGrid& grid, const PhysicalParams& params) {
    params.validate();
    grid.validate();
    const double M = static_cast<double>(grid.m_time);
    return params.temporal_scale() * std::pow(M, 1.0 - 2.0 * grid.alpha) / 2.0;
}

double rect_asymptotic_sd(const RectGrid& grid, const PhysicalParams& params) {
    params.validate();
    grid.validate();
    const double N = static_cast<double>(grid.n_space);
    const double M = static_cast<double>(grid.m_time);
    return params.temporal_scale() * std::sqrt(std::pow(M, 1.0 - 4.0 * grid.alpha) / N);
}

} // namespace fwwave::variations
