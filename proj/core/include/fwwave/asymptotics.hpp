#pragma once

#include <atomic>
#include <cstddef>
#include <vector>

#include "fwwave/types.hpp"

namespace fwwave::asymptotics {

/// A series evaluation: value is the partial sum of the convergent
/// representation actually summed, truncation its term count, tail_bound an
/// analytic bound on the omitted mass.
struct SeriesValue {
    double value = 0.0;
    std::size_t truncation = 0;
    double tail_bound = 0.0;
};

/// Limiting variance constant of the standardized temporal variation for
/// H < 3/4:  sigma^2 = (1/6) sum_{k in Z} phi_H(k)^2.
/// The head |k| <= K is summed exactly; the k > K remainder is resummed as
/// a rapidly convergent Hurwitz-zeta series in the even binomial expansion
/// of phi_H, so tail_bound reaches ~1e-13 regardless of how slowly the raw
/// series decays. Throws for h >= 3/4 (series diverges) and when tol cannot
/// be met within the term cap.
SeriesValue sigma2(const HurstParam& h, double tol,
                   const std::atomic<bool>* cancel = nullptr);

/// Same constant written over the psi2 sequence, (H^2/24) sum psi2(|j|)^2;
/// equal to sigma2 term by term via psi2 = (2/H) phi_H. Exposed for the
/// identity tests.
double sigma2_partial_phi(const HurstParam& h, std::size_t K);
double sigma2_partial_psi2(const HurstParam& h, std::size_t K);

/// Numerical limit of N^4 E[V_N^2] for H > 3/4.
struct HighRegimeLimit {
    double extrapolated = 0.0;            // fitted-exponent Richardson limit
    double closed_form_candidate = 0.0;   // H(2H-1) / (4(4H-1)(4H-3))
    double fitted_exponent = 0.0;         // decay exponent of the correction
    bool converged = false;               // successive extrapolants within 5%
    std::vector<std::size_t> grid_sizes;
    std::vector<double> values;           // N^4 E[V_N^2] per grid size
    std::vector<double> extrapolants;
};

/// Evaluates N^4 E[V_N^2] exactly over N in {256, 512, ..., n_max} and
/// extrapolates with a fitted correction exponent. The exponent is fitted
/// rather than assumed; empirically it comes out near 4H - 3.
HighRegimeLimit limiting_variance_high(const HurstParam& h, std::size_t n_max,
                                       const std::atomic<bool>* cancel = nullptr);

/// m-th limiting cumulant of the standardized variation for H > 3/4 with
/// normalizer k_norm = lim N^4 E[V_N^2]:
///   k_m = 2^{m-1} (m-1)! (H(2H-1)/2)^m k_norm^{-m/2} I_m,
///   I_m = cyclic integral of prod |x_i - x_{i+1}|^{2H-2} min(x_i, x_{i+1}).
/// The integral is evaluated as the cyclic trace of the mesh x mesh transfer
/// matrix Phi(a,b) = phi_H(|a-b|) (min(a,b)+1): phi_H is exactly the
/// singular factor integrated over a grid cell, so the diagonal needs no
/// exclusion and the estimate converges like the finite-N cumulants do.
/// Cost is O(mesh^2 m) via repeated matrix-vector contraction.
double limiting_cumulant(const HurstParam& h, int order, std::size_t mesh, double k_norm);

/// Berry-Esseen-type rate of the temporal CLT, as (exponent, log-power):
/// distance ~ N^exponent * log(N)^log_power.
struct RateDescriptor {
    double exponent = 0.0;
    double log_power = 0.0;
};

/// (-1/2, 0) on [1/2, 5/8), (-1/2, 3/2) at 5/8, (4H-3, 0) on (5/8, 3/4).
RateDescriptor clt_rate(const HurstParam& h);

} // namespace fwwave::asymptotics
