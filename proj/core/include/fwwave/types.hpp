#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace fwwave {

/// Grid violates a validity constraint (e.g. the rectangular separation
/// condition 2*dt*M < dx/c).
class constraint_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A covariance matrix could not be factorized even after the jitter ladder.
class factorization_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A cooperative cancellation token was triggered.
class cancelled_error : public std::runtime_error {
public:
    cancelled_error() : std::runtime_error("computation cancelled") {}
};

/// Hurst index of the temporal noise. Valid range is [1/2, 1) with the
/// boundary value 3/4 rejected: the variation statistics change their
/// limiting behaviour there and none of the closed forms below apply.
class HurstParam {
public:
    explicit HurstParam(double h) : h_(h) {
        if (!(h >= 0.5) || !(h < 1.0))
            throw std::domain_error("Hurst parameter must lie in [1/2, 1)");
        if (h == 0.75)
            throw std::domain_error("Hurst parameter 3/4 is a boundary case and not supported");
    }

    double value() const noexcept { return h_; }
    /// alpha_H = H(2H-1), the constant of the fBm covariance density.
    double alpha() const noexcept { return h_ * (2.0 * h_ - 1.0); }
    bool above_three_quarters() const noexcept { return h_ > 0.75; }

private:
    double h_;
};

/// A point (t, x) in time-space, t >= 0.
struct SpaceTimePoint {
    double t = 0.0;
    double x = 0.0;
};

/// Wave speed c != 0 and volatility Sigma > 0 of the scaled equation.
/// Only the combination sigma_vol^2 / c enters temporal laws, which is why
/// p = c / Sigma^2 and q = c^2 / Sigma^2 are the identifiable targets.
struct PhysicalParams {
    double c = 1.0;
    double sigma_vol = 1.0;

    void validate() const {
        if (c == 0.0) throw std::domain_error("wave speed c must be nonzero");
        if (!(sigma_vol > 0.0)) throw std::domain_error("volatility must be positive");
    }

    /// Temporal covariance scale Sigma^2 / c.
    double temporal_scale() const { return sigma_vol * sigma_vol / c; }
    double p() const { return c / (sigma_vol * sigma_vol); }
    double q() const { return c * c / (sigma_vol * sigma_vol); }
};

/// Uniform temporal grid over [0, 1]: n increments [i/n, (i+1)/n].
struct TemporalGrid {
    std::size_t n = 0;

    void validate() const {
        if (n == 0) throw std::domain_error("grid size must be positive");
    }
};

/// Space-time observation grid: x_i = i/n for i = 0..n (space),
/// t_j = j * m^-alpha for j = 0..m (time). Rectangular increments are
/// indexed by (i, j) with i in [0, n) and j in [0, m).
struct RectGrid {
    std::size_t n_space = 0;
    std::size_t m_time = 0;
    double alpha = 0.0;

    double dx() const { return 1.0 / static_cast<double>(n_space); }
    double dt() const { return std::pow(static_cast<double>(m_time), -alpha); }

    void validate() const {
        if (n_space == 0 || m_time == 0)
            throw std::domain_error("rectangular grid must have positive extents");
        if (!(alpha > 0.0))
            throw std::domain_error("time mesh exponent alpha must be positive");
    }

    /// Separation condition for wave speed c: every pair of distinct spatial
    /// points must be outside each other's light cones on the whole time
    /// range, i.e. 2 * dt * m < dx / |c|. The closed-form increment
    /// covariance is valid only under this condition.
    bool admissible(double c) const {
        return 2.0 * dt() * static_cast<double>(m_time) < dx() / std::abs(c);
    }

    void require_admissible(double c) const {
        validate();
        if (!admissible(c))
            throw constraint_error(
                "inadmissible grid: need 2*dt*M < dx/|c| (got 2*" + std::to_string(dt()) + "*" +
                std::to_string(m_time) + " vs " + std::to_string(dx() / std::abs(c)) + ")");
    }

    std::size_t increment_count() const { return n_space * m_time; }
};

} // namespace fwwave
