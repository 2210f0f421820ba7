#include "fwwave/asymptotics.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "fwwave/kernels.hpp"
#include "fwwave/sampler.hpp"

namespace fwwave::asymptotics {

namespace {

void check_cancel(const std::atomic<bool>* cancel) {
    if (cancel && cancel->load(std::memory_order_relaxed)) throw cancelled_error();
}

double binom(double a, int r) {
    double c = 1.0;
    for (int q = 0; q < r; ++q) c *= (a - q) / (q + 1);
    return c;
}

// Hurwitz zeta sum_{k>=0} (a+k)^{-s} for s > 1, a > 0, by Euler-Maclaurin.
double hurwitz_zeta(double s, double a) {
    static const double bern[] = {1.0 / 6,      -1.0 / 30,     1.0 / 42,     -1.0 / 30,
                                  5.0 / 66,     -691.0 / 2730, 7.0 / 6,      -3617.0 / 510,
                                  43867.0 / 798, -174611.0 / 330};
    double head = 0.0;
    double b = a;
    while (b < 32.0) {
        head += std::pow(b, -s);
        b += 1.0;
    }
    double res = head + std::pow(b, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(b, -s);
    double poch = s;          // s (s+1) ... running Pochhammer of odd length
    double bpow = std::pow(b, -s - 1.0);
    double factj = 2.0;       // (2j)!
    for (int j = 1; j <= 10; ++j) {
        res += bern[j - 1] / factj * poch * bpow;
        poch *= (s + 2.0 * j - 1.0) * (s + 2.0 * j);
        bpow /= b * b;
        factj *= (2.0 * j + 1.0) * (2.0 * j + 2.0);
    }
    return res;
}

} // namespace

double sigma2_partial_phi(const HurstParam& h, std::size_t K) {
    double acc = 1.0; // phi(0)^2
    for (std::size_t k = 1; k <= K; ++k) {
        const double p = kernels::phi(h, k);
        acc += 2.0 * p * p;
    }
    return acc / 6.0;
}

double sigma2_partial_psi2(const HurstParam& h, std::size_t K) {
    const double H = h.value();
    double acc = kernels::psi2(h, 0) * kernels::psi2(h, 0);
    for (std::size_t k = 1; k <= K; ++k) {
        const double p = kernels::psi2(h, k);
        acc += 2.0 * p * p;
    }
    return H * H / 24.0 * acc;
}

SeriesValue sigma2(const HurstParam& h, double tol, const std::atomic<bool>* cancel) {
    if (h.value() >= 0.75)
        throw std::domain_error("sigma2: series diverges for H >= 3/4");
    if (!(tol > 0.0)) throw std::domain_error("sigma2: tol must be positive");
    const double H = h.value();

    // phi decomposed in its even binomial series: phi(k) = sum_m b_m k^{2H-2m}.
    constexpr int kMaxB = 60;
    double bcoef[kMaxB + 1];
    double babs_sum = 0.0;
    for (int m = 1; m <= kMaxB; ++m) {
        bcoef[m] = binom(2.0 * H, 2 * m);
        babs_sum += std::abs(bcoef[m]);
    }

    constexpr std::size_t kTermCap = 10'000'000;
    std::size_t K = 64;
    while (true) {
        check_cancel(cancel);
        // head: |k| <= K summed directly
        double head = 1.0;
        for (std::size_t k = 1; k <= K; ++k) {
            const double p = kernels::phi(h, k);
            head += 2.0 * p * p;
            if ((k & 0xffff) == 0) check_cancel(cancel);
        }
        // tail k > K: sum_p c_p zeta(2p - 4H, K+1), c_p = sum_{j+l=p} b_j b_l
        const double a = static_cast<double>(K) + 1.0;
        double tail = 0.0;
        double bound = 0.0;
        int P = 2;
        std::size_t terms = K;
        for (; P <= 2 * kMaxB; ++P) {
            double cp = 0.0;
            for (int j = std::max(1, P - kMaxB); j <= P - 1 && j <= kMaxB; ++j)
                cp += bcoef[j] * bcoef[P - j];
            const double z = hurwitz_zeta(2.0 * P - 4.0 * H, a);
            tail += cp * z;
            ++terms;
            if (std::abs(cp) * z < 1e-3 * tol && P >= 4) {
                bound = babs_sum * babs_sum * hurwitz_zeta(2.0 * (P + 1) - 4.0 * H, a);
                break;
            }
        }
        if (P > 2 * kMaxB)
            bound = babs_sum * babs_sum * hurwitz_zeta(2.0 * (2 * kMaxB + 1) - 4.0 * H, a);
        const double tail_bound = bound / 3.0; // the factor 2/6 of the symmetric sum
        if (tail_bound <= tol) {
            SeriesValue out;
            out.value = (head + 2.0 * tail) / 6.0;
            out.truncation = terms;
            out.tail_bound = tail_bound;
            return out;
        }
        if (K >= kTermCap)
            throw std::runtime_error("sigma2: tolerance unreachable within term cap");
        K *= 8;
    }
}

HighRegimeLimit limiting_variance_high(const HurstParam& h, std::size_t n_max,
                                       const std::atomic<bool>* cancel) {
    const double H = h.value();
    if (!(H > 0.75))
        throw std::domain_error("limiting_variance_high: requires H > 3/4");
    if (n_max < 1024)
        throw std::domain_error("limiting_variance_high: n_max must be >= 1024");
    HighRegimeLimit out;
    out.closed_form_candidate = H * (2 * H - 1) / (4.0 * (4 * H - 1) * (4 * H - 3));
    for (std::size_t n = 256; n <= n_max; n *= 2) {
        check_cancel(cancel);
        const double v = std::pow(static_cast<double>(n), 4.0) *
                         sampler::temporal_vn_second_moment(h, n);
        out.grid_sizes.push_back(n);
        out.values.push_back(v);
    }
    const auto& A = out.values;
    for (std::size_t i = 2; i < A.size(); ++i) {
        const double num = A[i - 1] - A[i - 2];
        const double den = A[i] - A[i - 1];
        if (!(num / den > 0.0)) continue;
        const double p = std::log2(num / den);
        out.fitted_exponent = p;
        out.extrapolants.push_back(A[i] + (A[i] - A[i - 1]) / (std::exp2(p) - 1.0));
    }
    if (out.extrapolants.empty())
        throw std::runtime_error("limiting_variance_high: extrapolation failed");
    out.extrapolated = out.extrapolants.back();
    if (out.extrapolants.size() >= 2) {
        const double prev = out.extrapolants[out.extrapolants.size() - 2];
        out.converged = std::abs(out.extrapolated - prev) <= 0.05 * std::abs(prev);
    }
    return out;
}

double limiting_cumulant(const HurstParam& h, int order, std::size_t mesh, double k_norm) {
    const double H = h.value();
    if (!(H > 0.75))
        throw std::domain_error("limiting_cumulant: requires H > 3/4");
    if (order < 3) throw std::domain_error("limiting_cumulant: order must be >= 3");
    if (mesh < 8) throw std::domain_error("limiting_cumulant: mesh must be >= 8");
    if (mesh > 4096) throw std::invalid_argument("limiting_cumulant: mesh too large");
    if (!(k_norm > 0.0)) throw std::domain_error("limiting_cumulant: k_norm must be positive");

    std::vector<double> ph(mesh);
    for (std::size_t k = 0; k < mesh; ++k) ph[k] = kernels::phi(h, k);
    const Eigen::Index d = static_cast<Eigen::Index>(mesh);
    Eigen::MatrixXd Phi(d, d);
    for (Eigen::Index a = 0; a < d; ++a)
        for (Eigen::Index b = 0; b <= a; ++b) {
            const double v = ph[static_cast<std::size_t>(a - b)] * static_cast<double>(b + 1);
            Phi(a, b) = v;
            Phi(b, a) = v;
        }
    double tr;
    if (order == 2) {
        tr = Phi.squaredNorm();
    } else {
        Eigen::MatrixXd power = Phi * Phi;
        for (int k = 3; k < order; ++k) power = power * Phi;
        tr = power.cwiseProduct(Phi).sum();
    }
    double fact = 1.0;
    for (int k = 2; k < order; ++k) fact *= k;
    return 0.5 * fact * std::pow(k_norm, -0.5 * order) *
           std::pow(static_cast<double>(mesh), -2.0 * H * order) * tr;
}

RateDescriptor clt_rate(const HurstParam& h) {
    const double H = h.value();
    if (!(H < 0.75))
        throw std::domain_error("clt_rate: defined for 1/2 <= H < 3/4");
    if (H < 0.625) return {-0.5, 0.0};
    if (H == 0.625) return {-0.5, 1.5};
    return {4.0 * H - 3.0, 0.0};
}

} // namespace fwwave::asymptotics
