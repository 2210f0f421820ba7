#include "fwwave/sampler.hpp"

#include <atomic>
#include <cmath>
#include <cstring>
#include <fstream>
#include <thread>
#include <vector>

#include "fwwave/kernels.hpp"

namespace fwwave::sampler {

namespace {

std::atomic<std::uint64_t> g_factorizations{0};

constexpr char kMagic[4] = {'F', 'W', 'C', 'M'};
constexpr std::uint32_t kFormatVersion = 1;

void write_raw(std::ostream& os, const void* p, std::size_t n) {
    os.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

void read_raw(std::istream& is, void* p, std::size_t n) {
    is.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (!is) throw std::runtime_error("covariance model dump: truncated stream");
}

unsigned effective_jobs(unsigned jobs) {
    if (jobs != 0) return jobs;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

} // namespace

CovarianceModel CovarianceModel::factorize(Eigen::MatrixXd matrix, ModelMeta meta) {
    if (matrix.rows() != matrix.cols() || matrix.rows() == 0)
        throw std::invalid_argument("covariance matrix must be square and nonempty");
    // enforce exact symmetry before factorizing
    Eigen::MatrixXd sym = 0.5 * (matrix + matrix.transpose());
    const double mean_diag = sym.diagonal().mean();
    const double ladder[4] = {0.0, 1e-14, 1e-12, 1e-10};
    for (double eps : ladder) {
        Eigen::MatrixXd attempt = sym;
        if (eps > 0.0) attempt.diagonal().array() += eps * mean_diag;
        ++g_factorizations;
        Eigen::LLT<Eigen::MatrixXd> llt(attempt);
        if (llt.info() == Eigen::Success) {
            CovarianceModel out;
            out.matrix_ = std::move(sym);
            out.factor_ = llt.matrixL();
            meta.jitter = eps * mean_diag;
            out.meta_ = meta;
            return out;
        }
    }
    throw factorization_error("covariance matrix is not positive definite after jitter ladder");
}

void CovarianceModel::save(std::ostream& os) const {
    write_raw(os, kMagic, 4);
    write_raw(os, &kFormatVersion, sizeof kFormatVersion);
    const std::uint64_t d = static_cast<std::uint64_t>(dim());
    write_raw(os, &d, sizeof d);
    // row-major payloads
    for (Eigen::Index r = 0; r < matrix_.rows(); ++r)
        write_raw(os, matrix_.row(r).eval().data(), sizeof(double) * matrix_.cols());
    for (Eigen::Index r = 0; r < factor_.rows(); ++r)
        write_raw(os, factor_.row(r).eval().data(), sizeof(double) * factor_.cols());
    const std::uint32_t kind = static_cast<std::uint32_t>(meta_.kind);
    const std::uint64_t n = meta_.n, m = meta_.m;
    write_raw(os, &kind, sizeof kind);
    write_raw(os, &meta_.h, sizeof(double));
    write_raw(os, &n, sizeof n);
    write_raw(os, &m, sizeof m);
    write_raw(os, &meta_.alpha, sizeof(double));
    write_raw(os, &meta_.c, sizeof(double));
    write_raw(os, &meta_.sigma_vol, sizeof(double));
    write_raw(os, &meta_.t_fixed, sizeof(double));
    write_raw(os, &meta_.jitter, sizeof(double));
}

CovarianceModel CovarianceModel::load(std::istream& is) {
    char magic[4];
    read_raw(is, magic, 4);
    if (std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("covariance model dump: bad magic");
    std::uint32_t version = 0;
    read_raw(is, &version, sizeof version);
    if (version != kFormatVersion)
        throw std::runtime_error("covariance model dump: unsupported version");
    std::uint64_t d = 0;
    read_raw(is, &d, sizeof d);
    CovarianceModel out;
    out.matrix_.resize(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    out.factor_.resize(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    std::vector<double> row(d);
    for (std::uint64_t r = 0; r < d; ++r) {
        read_raw(is, row.data(), sizeof(double) * d);
        for (std::uint64_t c2 = 0; c2 < d; ++c2)
            out.matrix_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c2)) = row[c2];
    }
    for (std::uint64_t r = 0; r < d; ++r) {
        read_raw(is, row.data(), sizeof(double) * d);
        for (std::uint64_t c2 = 0; c2 < d; ++c2)
            out.factor_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c2)) = row[c2];
    }
    std::uint32_t kind = 0;
    std::uint64_t n = 0, m = 0;
    read_raw(is, &kind, sizeof kind);
    read_raw(is, &out.meta_.h, sizeof(double));
    read_raw(is, &n, sizeof n);
    read_raw(is, &m, sizeof m);
    read_raw(is, &out.meta_.alpha, sizeof(double));
    read_raw(is, &out.meta_.c, sizeof(double));
    read_raw(is, &out.meta_.sigma_vol, sizeof(double));
    read_raw(is, &out.meta_.t_fixed, sizeof(double));
    read_raw(is, &out.meta_.jitter, sizeof(double));
    out.meta_.kind = static_cast<ModelKind>(kind);
    out.meta_.n = n;
    out.meta_.m = m;
    return out;
}

void CovarianceModel::save_file(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    save(os);
}

CovarianceModel CovarianceModel::load_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    return load(is);
}

CovarianceModel build_temporal_model(const HurstParam& h, std::size_t n,
                                     const PhysicalParams& params) {
    params.validate();
    if (n == 0) throw std::domain_error("build_temporal_model: n must be >= 1");
    const double scale = params.temporal_scale();
    Eigen::MatrixXd C(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            const double v = scale * kernels::increment_cov_corollary(h, n, i, j);
            C(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
            C(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
        }
    ModelMeta meta;
    meta.kind = ModelKind::temporal;
    meta.h = h.value();
    meta.n = n;
    meta.c = params.c;
    meta.sigma_vol = params.sigma_vol;
    return CovarianceModel::factorize(std::move(C), meta);
}

CovarianceModel build_rect_model(const RectGrid& grid, const PhysicalParams& params) {
    params.validate();
    grid.require_admissible(params.c);
    const std::size_t N = grid.n_space, M = grid.m_time;
    const double scale = params.temporal_scale();
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(N * M),
                                              static_cast<Eigen::Index>(N * M));
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < M; ++j)
            for (std::size_t k = i; k < N; ++k)
                for (std::size_t l = (k == i ? j : 0); l < M; ++l) {
                    const double v =
                        scale * kernels::rect_increment_cov_expanded(grid, i, k, j, l, params.c);
                    const Eigen::Index a = static_cast<Eigen::Index>(i * M + j);
                    const Eigen::Index b = static_cast<Eigen::Index>(k * M + l);
                    C(a, b) = v;
                    C(b, a) = v;
                }
    ModelMeta meta;
    meta.kind = ModelKind::rectangular;
    meta.h = 0.5;
    meta.n = N;
    meta.m = M;
    meta.alpha = grid.alpha;
    meta.c = params.c;
    meta.sigma_vol = params.sigma_vol;
    return CovarianceModel::factorize(std::move(C), meta);
}

CovarianceModel build_spatial_model(double t, std::size_t n, const PhysicalParams& params) {
    params.validate();
    if (!(t > 0.0)) throw std::domain_error("build_spatial_model: t must be positive");
    if (n == 0) throw std::domain_error("build_spatial_model: n must be >= 1");
    const double scale = params.temporal_scale();
    const double dx = 1.0 / (static_cast<double>(n) * std::abs(params.c));
    auto level_cov = [&](std::size_t a, std::size_t b) {
        const SpaceTimePoint p{t, static_cast<double>(a) * dx};
        const SpaceTimePoint q{t, static_cast<double>(b) * dx};
        return kernels::field_cov_white(p, q);
    };
    Eigen::MatrixXd C(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            const double v = scale * (level_cov(i + 1, j + 1) - level_cov(i + 1, j) -
                                      level_cov(i, j + 1) + level_cov(i, j));
            C(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
            C(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
        }
    ModelMeta meta;
    meta.kind = ModelKind::spatial_slice;
    meta.h = 0.5;
    meta.n = n;
    meta.c = params.c;
    meta.sigma_vol = params.sigma_vol;
    meta.t_fixed = t;
    return CovarianceModel::factorize(std::move(C), meta);
}

Eigen::MatrixXd sample_increments(const CovarianceModel& model, std::size_t reps,
                                  std::uint64_t master_seed, unsigned jobs) {
    const Eigen::Index dim = model.dim();
    Eigen::MatrixXd out(static_cast<Eigen::Index>(reps), dim);
    const Eigen::MatrixXd& L = model.factor();
    auto worker = [&](std::size_t lo, std::size_t hi) {
        Eigen::VectorXd z(dim);
        for (std::size_t r = lo; r < hi; ++r) {
            rng::NormalStream stream(master_seed, r);
            for (Eigen::Index i = 0; i < dim; ++i) z(i) = stream.next_normal();
            out.row(static_cast<Eigen::Index>(r)) =
                (L.triangularView<Eigen::Lower>() * z).transpose();
        }
    };
    const unsigned nj = std::min<std::size_t>(effective_jobs(jobs), reps == 0 ? 1 : reps);
    if (nj <= 1) {
        worker(0, reps);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nj);
        const std::size_t chunk = (reps + nj - 1) / nj;
        for (unsigned t = 0; t < nj; ++t) {
            const std::size_t lo = std::min(reps, static_cast<std::size_t>(t) * chunk);
            const std::size_t hi = std::min(reps, lo + chunk);
            if (lo < hi) pool.emplace_back(worker, lo, hi);
        }
        for (auto& th : pool) th.join();
    }
    return out;
}

double wick_second_moment(const CovarianceModel& model, double norm) {
    if (!(norm != 0.0)) throw std::domain_error("wick_second_moment: zero norm");
    const Eigen::MatrixXd& C = model.matrix();
    return 2.0 * C.squaredNorm() / (norm * norm);
}

double quadratic_form_cumulant(const CovarianceModel& model, int order, double norm) {
    if (order < 2) throw std::domain_error("quadratic_form_cumulant: order must be >= 2");
    if (!(norm != 0.0)) throw std::domain_error("quadratic_form_cumulant: zero norm");
    const Eigen::MatrixXd& C = model.matrix();
    // trace of C^m by repeated multiplication: power = C^{m-1} built m-2
    // multiplications, trace via elementwise product with C (C symmetric).
    double tr;
    if (order == 2) {
        tr = C.squaredNorm();
    } else {
        Eigen::MatrixXd power = C * C;
        for (int k = 3; k < order; ++k) power = power * C;
        tr = power.cwiseProduct(C).sum();
    }
    double fact = 1.0;
    for (int k = 2; k < order; ++k) fact *= k;
    return std::pow(2.0, order - 1) * fact * tr / std::pow(norm, order);
}

double temporal_vn_second_moment(const HurstParam& h, std::size_t n,
                                 const PhysicalParams& params) {
    params.validate();
    if (n == 0) throw std::domain_error("temporal_vn_second_moment: n must be >= 1");
    const double H = h.value();
    const double dn = static_cast<double>(n);
    const double scale = params.temporal_scale();
    // diagonal: sum_i (i/2 + 1/(2(2H+1)))^2 * n^{-2(2H+1)}
    double diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = static_cast<double>(i) / 2.0 + 0.5 / (2 * H + 1);
        diag += d * d;
    }
    diag *= std::pow(dn, -2.0 * (2 * H + 1));
    // off-diagonal by lag: sum_{k>=1} sum_{i=k}^{n-1} (psi1(k) + (i+1) psi2(k))^2
    //   = (n-k) psi1^2 + 2 psi1 psi2 S1(k) + psi2^2 S2(k)
    // with S1 = sum_{m=k+1}^{n} m, S2 = sum_{m=k+1}^{n} m^2.
    const double pref = H / (4.0 * std::pow(dn, 2 * H + 1));
    double off = 0.0;
    for (std::size_t k = 1; k < n; ++k) {
        const double p1 = kernels::psi1(h, k);
        const double p2 = kernels::psi2(h, k);
        const double kd = static_cast<double>(k);
        const double S1 = (dn * (dn + 1.0) - kd * (kd + 1.0)) / 2.0;
        const double S2 = (dn * (dn + 1.0) * (2.0 * dn + 1.0) - kd * (kd + 1.0) * (2.0 * kd + 1.0)) / 6.0;
        off += (dn - kd) * p1 * p1 + 2.0 * p1 * p2 * S1 + p2 * p2 * S2;
    }
    off *= pref * pref;
    return 2.0 * scale * scale * (diag + 2.0 * off) / (dn * dn);
}

double rect_vn_second_moment(const RectGrid& grid, const PhysicalParams& params) {
    params.validate();
    grid.require_admissible(params.c);
    const double N = static_cast<double>(grid.n_space);
    const double M = static_cast<double>(grid.m_time);
    const double dt2 = grid.dt() * grid.dt();
    const double scale = params.temporal_scale();
    double sum = 0.0;
    for (std::size_t j = 0; j < grid.m_time; ++j) {
        const double w = static_cast<double>(2 * j + 1) * dt2 / 4.0;
        sum += 4.0 * w * w * N + 2.0 * w * w * (N - 1.0);
    }
    const double nm = N * M;
    return 2.0 * scale * scale * sum / (nm * nm);
}

std::uint64_t factorization_count() noexcept { return g_factorizations.load(); }

} // namespace fwwave::sampler
