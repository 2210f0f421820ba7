#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <string>

#include "fwwave/rng.hpp"
#include "fwwave/types.hpp"

namespace fwwave::sampler {

enum class ModelKind { temporal, rectangular, spatial_slice };

/// Generating parameters of a covariance model, kept for reports and the
/// binary cache format. jitter records any diagonal shift that was needed
/// to factorize (0 in the usual PD case).
struct ModelMeta {
    ModelKind kind = ModelKind::temporal;
    double h = 0.5;
    std::size_t n = 0;       // grid size (temporal/spatial) or spatial extent (rect)
    std::size_t m = 0;       // temporal extent (rect only)
    double alpha = 0.0;      // rect time mesh exponent
    double c = 1.0;
    double sigma_vol = 1.0;
    double t_fixed = 0.0;    // spatial slice time
    double jitter = 0.0;
};

/// Dense covariance of an increment vector together with its lower
/// Cholesky factor. Immutable after construction; safe to share across
/// workers.
class CovarianceModel {
public:
    /// Factorizes matrix (symmetrized view) with the jitter ladder
    /// {0, 1e-14, 1e-12, 1e-10} * mean(diagonal); throws
    /// factorization_error when the ladder is exhausted.
    static CovarianceModel factorize(Eigen::MatrixXd matrix, ModelMeta meta);

    Eigen::Index dim() const { return matrix_.rows(); }
    const Eigen::MatrixXd& matrix() const { return matrix_; }
    const Eigen::MatrixXd& factor() const { return factor_; }
    const ModelMeta& meta() const { return meta_; }

    /// Versioned binary dump: magic, version, dims, row-major matrix and
    /// factor payloads, metadata block.
    void save(std::ostream& os) const;
    static CovarianceModel load(std::istream& is);
    void save_file(const std::string& path) const;
    static CovarianceModel load_file(const std::string& path);

private:
    CovarianceModel() = default;
    Eigen::MatrixXd matrix_;
    Eigen::MatrixXd factor_;
    ModelMeta meta_;
};

/// n x n covariance of the temporal increments scaled by Sigma^2/c.
CovarianceModel build_temporal_model(const HurstParam& h, std::size_t n,
                                     const PhysicalParams& params = {});

/// (n*m) x (n*m) covariance of rectangular increments, space-major ordering
/// (i, j) -> i*m + j, built by bilinear expansion of the white-noise field
/// covariance. Requires H = 1/2 semantics and an admissible grid for the
/// given c; the result then matches the closed-form pattern times Sigma^2/c.
CovarianceModel build_rect_model(const RectGrid& grid, const PhysicalParams& params = {});

/// n x n covariance of the spatial increments of the white-noise solution
/// at fixed time t over x_i = i/n (spacing scaled by 1/c).
CovarianceModel build_spatial_model(double t, std::size_t n,
                                    const PhysicalParams& params = {});

/// reps x dim matrix of increment vectors; row r is L * z with z the normal
/// stream of (master_seed, r). Bit-reproducible for any worker count.
Eigen::MatrixXd sample_increments(const CovarianceModel& model, std::size_t reps,
                                  std::uint64_t master_seed, unsigned jobs = 1);

/// Exact E[V^2] for V = (1/norm) sum_i (X_i^2 - E X_i^2), X ~ N(0, C):
/// (2/norm^2) * sum_{ij} C_ij^2.
double wick_second_moment(const CovarianceModel& model, double norm);

/// Exact m-th cumulant of the same V: 2^{m-1}(m-1)! tr(C^m) / norm^m, m >= 2.
double quadratic_form_cumulant(const CovarianceModel& model, int order, double norm);

/// Closed-form E[V_n^2] of the temporal variation without materializing the
/// matrix: the lag decomposition of the squared-covariance sum collapses to
/// an O(n) evaluation, exactly equal to wick_second_moment of the temporal
/// model with norm = n.
double temporal_vn_second_moment(const HurstParam& h, std::size_t n,
                                 const PhysicalParams& params = {});

/// Same for the rectangular variation (norm = n*m), O(m).
double rect_vn_second_moment(const RectGrid& grid, const PhysicalParams& params = {});

/// Number of Cholesky factorizations performed since process start
/// (instrumentation for factor-reuse tests).
std::uint64_t factorization_count() noexcept;

} // namespace fwwave::sampler
