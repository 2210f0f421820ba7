#include "fwwave/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace fwwave::kernels {

namespace {

// Generalized binomial coefficient C(a, r) for real a.
double binom(double a, int r) {
    double c = 1.0;
    for (int q = 0; q < r; ++q) c *= (a - q) / (q + 1);
    return c;
}

// g_a(x) = (1+x)^a - 2 + (1-x)^a for x = 1/k in (0, 1].
// Direct evaluation loses all digits once x^2 ~ machine epsilon, so for
// small x we sum the even binomial series 2 * sum_{m>=1} C(a,2m) x^{2m},
// which terminates at machine precision after a few terms.
double even_diff(double a, double x) {
    if (x > 1e-3) {
        // expm1/log1p keeps full precision down to x ~ 1e-3
        return std::expm1(a * std::log1p(x)) + std::expm1(a * std::log1p(-x));
    }
    double x2 = x * x;
    double term = binom(a, 2) * x2;
    double sum = term;
    double xp = x2;
    for (int m = 2; m <= 8; ++m) {
        xp *= x2;
        double t = binom(a, 2 * m) * xp;
        sum += t;
        if (std::abs(t) < 1e-22 * std::abs(sum)) break;
    }
    return 2.0 * sum;
}

// (1+x)^a - 1 with the same precision strategy.
double one_diff(double a, double x) {
    return std::expm1(a * std::log1p(x));
}

double pow_abs(double v, double e) {
    if (v == 0.0) return 0.0; // convention 0^e := 0 for e > 0
    return std::pow(std::abs(v), e);
}

} // namespace

double temporal_cov(const HurstParam& h, double t, double s) {
    if (t < 0.0 || s < 0.0) throw std::domain_error("temporal_cov: negative time");
    if (t < s) std::swap(t, s);
    if (s == 0.0) return 0.0;
    const double H = h.value();
    const double d = t - s;
    const double term1 = (std::pow(t, 2 * H + 1) + std::pow(s, 2 * H + 1)) / (H * (2 * H + 1));
    const double term2 = (1.0 / H) * t * pow_abs(d, 2 * H);
    const double term3 = (2.0 / (2 * H + 1)) * pow_abs(d, 2 * H + 1);
    return (H / 4.0) * (term1 - term2 + term3);
}

double increment_cov(const HurstParam& h, std::size_t n, std::size_t i, std::size_t j) {
    if (n == 0) throw std::domain_error("increment_cov: empty grid");
    if (i >= n || j >= n) throw std::out_of_range("increment_cov: index out of range");
    const double dn = static_cast<double>(n);
    const double ti = static_cast<double>(i) / dn, ti1 = static_cast<double>(i + 1) / dn;
    const double tj = static_cast<double>(j) / dn, tj1 = static_cast<double>(j + 1) / dn;
    return temporal_cov(h, ti1, tj1) - temporal_cov(h, ti1, tj)
         - temporal_cov(h, ti, tj1) + temporal_cov(h, ti, tj);
}

double increment_cov_corollary(const HurstParam& h, std::size_t n, std::size_t i, std::size_t j) {
    if (n == 0) throw std::domain_error("increment_cov: empty grid");
    if (i >= n || j >= n) throw std::out_of_range("increment_cov: index out of range");
    const double H = h.value();
    const double dn = static_cast<double>(n);
    if (i == j) {
        // variance of the increment ending at (i+1)/n
        return std::pow(dn, -2 * H - 1) * (static_cast<double>(i) / 2.0 + 0.5 / (2 * H + 1));
    }
    if (i < j) std::swap(i, j);
    const std::uint64_t k = i - j;
    return H / (4.0 * std::pow(dn, 2 * H + 1)) *
           (psi1(h, k) + static_cast<double>(i + 1) * psi2(h, k));
}

double psi1(const HurstParam& h, std::uint64_t k) {
    if (k < 1) throw std::domain_error("psi1: k must be >= 1");
    const double H = h.value();
    const double kd = static_cast<double>(k);
    if (k == 1) {
        return (1.0 / H) - (2.0 / (2 * H + 1)) * (std::pow(2.0, 2 * H + 1) - 2.0);
    }
    const double x = 1.0 / kd;
    // k^{2H} - (k-1)^{2H} = -k^{2H} ((1-x)^{2H} - 1)
    const double first = -(1.0 / H) * std::pow(kd, 2 * H) * one_diff(2 * H, -x);
    const double second = (2.0 / (2 * H + 1)) * std::pow(kd, 2 * H + 1) * even_diff(2 * H + 1, x);
    return first - second;
}

double psi2(const HurstParam& h, std::uint64_t k) {
    const double H = h.value();
    if (k == 0) return 2.0 / H;
    if (k == 1) return (1.0 / H) * (std::pow(2.0, 2 * H) - 2.0);
    const double kd = static_cast<double>(k);
    return (1.0 / H) * std::pow(kd, 2 * H) * even_diff(2 * H, 1.0 / kd);
}

double phi(const HurstParam& h, std::uint64_t k) {
    return 0.5 * h.value() * psi2(h, k);
}

double psi1_asym(const HurstParam& h, double k) {
    const double H = h.value();
    return 2.0 * (1.0 - 2 * H) * std::pow(k, 2 * H - 1);
}

double psi2_asym(const HurstParam& h, double k) {
    const double H = h.value();
    return 2.0 * (2 * H - 1.0) * std::pow(k, 2 * H - 2);
}

double field_cov_white(const SpaceTimePoint& p1, const SpaceTimePoint& p2) {
    if (p1.t < 0.0 || p2.t < 0.0) throw std::domain_error("field_cov_white: negative time");
    double t = p1.t, s = p2.t;
    const double d = std::abs(p1.x - p2.x);
    if (t < s) std::swap(t, s);
    if (t - s >= d) return s * s / 4.0;
    if (d < t + s) {
        const double r = t + s - d;
        return r * r / 16.0;
    }
    return 0.0;
}

double rect_increment_cov(const RectGrid& g, std::size_t i, std::size_t k,
                          std::size_t j, std::size_t l) {
    g.require_admissible(1.0);
    if (i >= g.n_space || k >= g.n_space || j >= g.m_time || l >= g.m_time)
        throw std::out_of_range("rect_increment_cov: index out of range");
    if (j != l) return 0.0;
    const double dt = g.dt();
    const double w = static_cast<double>(2 * j + 1) * dt * dt / 4.0;
    if (i == k) return 2.0 * w;
    if (i + 1 == k || k + 1 == i) return -w;
    return 0.0;
}

double rect_increment_cov_expanded(const RectGrid& g, std::size_t i, std::size_t k,
                                   std::size_t j, std::size_t l, double c) {
    g.validate();
    if (c == 0.0) throw std::domain_error("wave speed c must be nonzero");
    if (i >= g.n_space || k >= g.n_space || j >= g.m_time || l >= g.m_time)
        throw std::out_of_range("rect_increment_cov_expanded: index out of range");
    const double dx = g.dx() / std::abs(c);
    const double dt = g.dt();
    double acc = 0.0;
    const int si[4] = {+1, -1, -1, +1};
    // corner offsets of the increment (i,j): (i+1,j+1), (i+1,j), (i,j+1), (i,j)
    const std::size_t ai[4] = {i + 1, i + 1, i, i};
    const std::size_t bj[4] = {j + 1, j, j + 1, j};
    const std::size_t ak[4] = {k + 1, k + 1, k, k};
    const std::size_t bl[4] = {l + 1, l, l + 1, l};
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            const SpaceTimePoint p{static_cast<double>(bj[a]) * dt, static_cast<double>(ai[a]) * dx};
            const SpaceTimePoint q{static_cast<double>(bl[b]) * dt, static_cast<double>(ak[b]) * dx};
            acc += si[a] * si[b] * field_cov_white(p, q);
        }
    }
    return acc;
}

} // namespace fwwave::kernels
