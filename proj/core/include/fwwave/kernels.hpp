#pragma once

#include <cstddef>
#include <cstdint>

#include "fwwave/types.hpp"

namespace fwwave::kernels {

/// E[u(t,x) u(s,x)] of the fractional-white wave solution; independent of x.
/// Symmetric in (t, s), zero when either argument is zero, and reduces to
/// min(t,s)^2/4 at H = 1/2.
double temporal_cov(const HurstParam& h, double t, double s);

/// Covariance of the temporal increments over [i/n,(i+1)/n] and
/// [j/n,(j+1)/n], computed by bilinear expansion of temporal_cov over the
/// four corners. 0-based increment indices.
double increment_cov(const HurstParam& h, std::size_t n, std::size_t i, std::size_t j);

/// Same quantity through the psi sequences:
///   cov = H/(4 n^{2H+1}) * (psi1(k) + (i+1) psi2(k)),  k = i-j > 0,
/// where the +1 shift converts 0-based increments to the 1-based indexing of
/// the psi decomposition (its index i labels the increment ending at i/n).
double increment_cov_corollary(const HurstParam& h, std::size_t n, std::size_t i, std::size_t j);

/// psi1(k) = (2/2H)(k^{2H}-(k-1)^{2H})
///         - (2/(2H+1))((k+1)^{2H+1}-2k^{2H+1}+(k-1)^{2H+1}),  k >= 1.
double psi1(const HurstParam& h, std::uint64_t k);

/// psi2(k) = (2/2H)((k+1)^{2H}-2k^{2H}+(k-1)^{2H}),  k >= 0.
/// Large-k evaluation factors out k^{2H} and sums the even binomial series,
/// avoiding the catastrophic cancellation of the direct form.
double psi2(const HurstParam& h, std::uint64_t k);

/// Second difference sequence phi_H(k) = ((k+1)^{2H}-2k^{2H}+(k-1)^{2H})/2,
/// k >= 0, with phi_H(0) = 1. Identity: psi2 = (2/H) phi_H.
double phi(const HurstParam& h, std::uint64_t k);

/// Leading asymptotics 2(1-2H) k^{2H-1} and 2(2H-1) k^{2H-2}.
double psi1_asym(const HurstParam& h, double k);
double psi2_asym(const HurstParam& h, double k);

/// E[u(t,x) u(s,y)] for the white-in-time case (H = 1/2):
///   s'^2/4                 if t'-s' >= |x-y|
///   (t'+s'-|x-y|)^2/16     if t'-s' < |x-y| < t'+s'
///   0                      otherwise,
/// where (t',s') orders the two times so that t' >= s'.
double field_cov_white(const SpaceTimePoint& p1, const SpaceTimePoint& p2);

/// Covariance of rectangular increments (i,j) and (k,l) of the white-noise
/// solution on an admissible grid (spatial index first, temporal second).
/// Under the separation condition increments at distinct spatial points
/// share at most one spatial endpoint, and only the temporal second
/// difference of min(t,s)^2/4 survives:
///   +2 w_j  if i == k and j == l,
///   -  w_j  if |i - k| == 1 and j == l,
///      0    otherwise,         with w_j = (2j+1) dt^2 / 4.
/// Throws constraint_error when the grid is not admissible for c = 1; the
/// bilinear route rect_increment_cov_expanded stays valid on any grid.
double rect_increment_cov(const RectGrid& g, std::size_t i, std::size_t k,
                          std::size_t j, std::size_t l);

/// Always-valid bilinear expansion of field_cov_white over the 16 corner
/// pairs of two rectangular increments, with spatial coordinates scaled by
/// 1/c (unit volatility; multiply by Sigma^2/c for the physical field).
double rect_increment_cov_expanded(const RectGrid& g, std::size_t i, std::size_t k,
                                   std::size_t j, std::size_t l, double c);

} // namespace fwwave::kernels
