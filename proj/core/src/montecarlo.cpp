#include "fwwave/montecarlo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "fwwave/asymptotics.hpp"
#include "fwwave/rng.hpp"
#include "fwwave/variations.hpp"
#include "fwwave/version.hpp"

namespace fwwave::montecarlo {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

unsigned effective_jobs(unsigned jobs) {
    if (jobs != 0) return jobs;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

std::vector<std::string> make_columns(const ExperimentConfig& cfg) {
    std::vector<std::string> cols = {"s_raw", "v_centered", "f_exact", "f_asym"};
    if (cfg.kind == ExperimentKind::temporal) {
        cols.push_back("hurst_hat");
        if (cfg.with_c) cols.push_back("c_hat");
        if (cfg.with_p) cols.push_back("p_hat");
    } else {
        cols.push_back("c_rect_hat");
    }
    return cols;
}

} // namespace

void ExperimentConfig::validate() const {
    if (reps < 1) throw std::domain_error("experiment: reps must be >= 1");
    if (n == 0) throw std::domain_error("experiment: n must be >= 1");
    HurstParam h_check(h);
    PhysicalParams{c, sigma_vol}.validate();
    if (kind == ExperimentKind::rectangular) {
        if (h != 0.5)
            throw std::domain_error("rectangular experiments require h = 0.5");
        RectGrid grid{n, m, alpha};
        grid.require_admissible(c);
    }
    const auto cols = make_columns(*this);
    const auto hc = histogram_column();
    if (std::find(cols.begin(), cols.end(), hc) == cols.end())
        throw std::domain_error("experiment: unknown histogram column " + hc);
}

std::string ExperimentConfig::histogram_column() const {
    if (!histogram_of.empty()) return histogram_of;
    return kind == ExperimentKind::temporal ? "hurst_hat" : "c_rect_hat";
}

ExperimentReport run_experiment(const ExperimentConfig& config, unsigned jobs) {
    config.validate();
    const auto t0 = std::chrono::steady_clock::now();

    const PhysicalParams params{config.c, config.sigma_vol};
    sampler::CovarianceModel model =
        config.kind == ExperimentKind::temporal
            ? sampler::build_temporal_model(HurstParam(config.h), config.n, params)
            : sampler::build_rect_model(RectGrid{config.n, config.m, config.alpha}, params);

    const std::size_t dim = static_cast<std::size_t>(model.dim());
    const double dimd = static_cast<double>(dim);
    const double expected_s = model.matrix().diagonal().mean();
    const double wick_var = sampler::wick_second_moment(model, dimd);
    const double exact_sd = std::sqrt(wick_var);

    double asym_sd;
    if (config.kind == ExperimentKind::temporal) {
        const HurstParam h(config.h);
        const double scale = params.temporal_scale();
        const double nd = static_cast<double>(config.n);
        if (config.h < 0.75) {
            const double s2 = asymptotics::sigma2(h, 1e-10).value;
            asym_sd = scale * std::sqrt(s2) * std::pow(nd, -2.0 * config.h - 0.5);
        } else {
            const double k = asymptotics::limiting_variance_high(h, 8192).extrapolated;
            asym_sd = scale * std::sqrt(k) * std::pow(nd, -2.0);
        }
    } else {
        asym_sd = variations::rect_asymptotic_sd(RectGrid{config.n, config.m, config.alpha}, params);
    }

    const auto columns = make_columns(config);
    const std::size_t ncols = columns.size();
    std::vector<std::vector<double>> records(config.reps, std::vector<double>(ncols, 0.0));

    const double logN = std::log(static_cast<double>(config.n));
    const double n2h = config.kind == ExperimentKind::temporal
                           ? std::pow(static_cast<double>(config.n), 2.0 * config.h)
                           : 0.0;
    const double m_rect = config.kind == ExperimentKind::rectangular
                              ? std::pow(static_cast<double>(config.m), 1.0 - 2.0 * config.alpha)
                              : 0.0;

    const Eigen::MatrixXd& L = model.factor();
    auto worker = [&](std::size_t lo, std::size_t hi) {
        Eigen::VectorXd z(model.dim());
        Eigen::VectorXd x(model.dim());
        for (std::size_t r = lo; r < hi; ++r) {
            rng::NormalStream stream(config.master_seed, r);
            for (Eigen::Index i = 0; i < model.dim(); ++i) z(i) = stream.next_normal();
            x.noalias() = L.triangularView<Eigen::Lower>() * z;
            double s = 0.0;
            for (Eigen::Index i = 0; i < model.dim(); ++i) s += x(i) * x(i);
            s /= dimd;
            auto& rec = records[r];
            std::size_t col = 0;
            rec[col++] = s;
            const double v = s - expected_s;
            rec[col++] = v;
            rec[col++] = v / exact_sd;
            rec[col++] = v / asym_sd;
            if (config.kind == ExperimentKind::temporal) {
                rec[col++] = -(std::log(4.0) + std::log(s)) / (2.0 * logN);
                if (config.with_c) rec[col++] = 1.0 / (4.0 * s * n2h);
                if (config.with_p) rec[col++] = 1.0 / (4.0 * s * n2h);
            } else {
                rec[col++] = m_rect / (2.0 * s);
            }
        }
    };

    const unsigned nj = std::min<std::size_t>(effective_jobs(jobs), config.reps);
    if (nj <= 1) {
        worker(0, config.reps);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (config.reps + nj - 1) / nj;
        for (unsigned t = 0; t < nj; ++t) {
            const std::size_t lo = std::min<std::size_t>(config.reps, t * chunk);
            const std::size_t hi = std::min<std::size_t>(config.reps, lo + chunk);
            if (lo < hi) pool.emplace_back(worker, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    ExperimentReport report;
    report.config = config;
    report.columns = columns;
    report.records = std::move(records);
    report.expected_s = expected_s;
    report.wick_v_variance = wick_var;
    report.asymptotic_sd = asym_sd;
    report.ks_critical_1pct = stats::ks_critical_value_1pct(config.reps);

    // deterministic reduction in replication order
    std::vector<double> colbuf(config.reps);
    for (std::size_t c2 = 0; c2 < ncols; ++c2) {
        for (std::size_t r = 0; r < config.reps; ++r) colbuf[r] = report.records[r][c2];
        ColumnSummary cs;
        cs.name = columns[c2];
        cs.moments = stats::summarize(colbuf);
        cs.cumulants = config.reps >= 10 ? stats::empirical_cumulants(colbuf, 4)
                                         : std::vector<double>{cs.moments.mean, cs.moments.variance};
        report.summaries.push_back(std::move(cs));
        if (columns[c2] == "f_exact") report.ks_f_exact = stats::ks_statistic(colbuf);
        if (columns[c2] == "f_asym") report.ks_f_asym = stats::ks_statistic(colbuf);
        if (columns[c2] == config.histogram_column()) {
            report.histogram_column = columns[c2];
            report.histogram = stats::freedman_diaconis(colbuf);
        }
    }

    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

namespace {

std::string kind_name(ExperimentKind k) {
    return k == ExperimentKind::temporal ? "temporal" : "rectangular";
}

ExperimentKind kind_from(const std::string& s) {
    if (s == "temporal") return ExperimentKind::temporal;
    if (s == "rectangular" || s == "rect") return ExperimentKind::rectangular;
    throw std::invalid_argument("config: unknown kind '" + s + "'");
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

} // namespace

ExperimentConfig parse_config(std::istream& is) {
    ExperimentConfig cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key == "kind") cfg.kind = kind_from(val);
        else if (key == "h") cfg.h = std::stod(val);
        else if (key == "n") cfg.n = std::stoull(val);
        else if (key == "m") cfg.m = std::stoull(val);
        else if (key == "alpha") cfg.alpha = std::stod(val);
        else if (key == "c") cfg.c = std::stod(val);
        else if (key == "sigma") cfg.sigma_vol = std::stod(val);
        else if (key == "reps") cfg.reps = std::stoull(val);
        else if (key == "seed") cfg.master_seed = std::stoull(val);
        else if (key == "with_c") cfg.with_c = (val == "true" || val == "1");
        else if (key == "with_p") cfg.with_p = (val == "true" || val == "1");
        else if (key == "histogram") cfg.histogram_of = val;
        else if (key == "tool_version") { /* echoed metadata */ }
        else
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": unknown key '" + key + "'");
    }
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config file " + path);
    return parse_config(is);
}

void write_manifest(const ExperimentConfig& cfg, std::ostream& os) {
    os << "tool_version = " << FWWAVE_VERSION << "\n";
    os << "kind = " << kind_name(cfg.kind) << "\n";
    os << "h = " << fmt(cfg.h) << "\n";
    os << "n = " << cfg.n << "\n";
    if (cfg.kind == ExperimentKind::rectangular) {
        os << "m = " << cfg.m << "\n";
        os << "alpha = " << fmt(cfg.alpha) << "\n";
    }
    os << "c = " << fmt(cfg.c) << "\n";
    os << "sigma = " << fmt(cfg.sigma_vol) << "\n";
    os << "reps = " << cfg.reps << "\n";
    os << "seed = " << cfg.master_seed << "\n";
    os << "with_c = " << (cfg.with_c ? "true" : "false") << "\n";
    os << "with_p = " << (cfg.with_p ? "true" : "false") << "\n";
    os << "histogram = " << cfg.histogram_column() << "\n";
}

void write_report_json(const ExperimentReport& report, std::ostream& os) {
    const auto& cfg = report.config;
    os << "{\n";
    os << "  \"schema\": \"fwwave.report/1\",\n";
    os << "  \"config\": {\n";
    os << "    \"kind\": \"" << kind_name(cfg.kind) << "\",\n";
    os << "    \"h\": " << fmt(cfg.h) << ",\n";
    os << "    \"n\": " << cfg.n << ",\n";
    os << "    \"m\": " << cfg.m << ",\n";
    os << "    \"alpha\": " << fmt(cfg.alpha) << ",\n";
    os << "    \"c\": " << fmt(cfg.c) << ",\n";
    os << "    \"sigma\": " << fmt(cfg.sigma_vol) << ",\n";
    os << "    \"reps\": " << cfg.reps << ",\n";
    os << "    \"seed\": " << cfg.master_seed << "\n";
    os << "  },\n";
    os << "  \"oracle\": {\n";
    os << "    \"expected_s\": " << fmt(report.expected_s) << ",\n";
    os << "    \"wick_v_variance\": " << fmt(report.wick_v_variance) << ",\n";
    os << "    \"asymptotic_sd\": " << fmt(report.asymptotic_sd) << "\n";
    os << "  },\n";
    os << "  \"ks\": {\n";
    os << "    \"f_exact\": " << fmt(report.ks_f_exact) << ",\n";
    os << "    \"f_asym\": " << fmt(report.ks_f_asym) << ",\n";
    os << "    \"critical_1pct\": " << fmt(report.ks_critical_1pct) << "\n";
    os << "  },\n";
    os << "  \"summaries\": {\n";
    for (std::size_t i = 0; i < report.summaries.size(); ++i) {
        const auto& s = report.summaries[i];
        os << "    \"" << s.name << "\": {\"mean\": " << fmt(s.moments.mean)
           << ", \"variance\": " << fmt(s.moments.variance)
           << ", \"skewness\": " << fmt(s.moments.skewness)
           << ", \"ex_kurtosis\": " << fmt(s.moments.ex_kurtosis) << ", \"k_statistics\": [";
        for (std::size_t k = 0; k < s.cumulants.size(); ++k)
            os << (k ? ", " : "") << fmt(s.cumulants[k]);
        os << "]}" << (i + 1 < report.summaries.size() ? "," : "") << "\n";
    }
    os << "  },\n";
    os << "  \"histogram\": {\n";
    os << "    \"column\": \"" << report.histogram_column << "\",\n";
    os << "    \"edges\": [";
    for (std::size_t i = 0; i < report.histogram.edges.size(); ++i)
        os << (i ? ", " : "") << fmt(report.histogram.edges[i]);
    os << "],\n";
    os << "    \"counts\": [";
    for (std::size_t i = 0; i < report.histogram.counts.size(); ++i)
        os << (i ? ", " : "") << report.histogram.counts[i];
    os << "]\n";
    os << "  }\n";
    os << "}\n";
}

void write_replications_csv(const ExperimentReport& report, std::ostream& os) {
    os << "rep";
    for (const auto& c : report.columns) os << "," << c;
    os << "\n";
    for (std::size_t r = 0; r < report.records.size(); ++r) {
        os << r;
        for (double v : report.records[r]) os << "," << fmt(v);
        os << "\n";
    }
}

void write_histogram_csv(const ExperimentReport& report, std::ostream& os) {
    os << "bin_lo,bin_hi,count\n";
    for (std::size_t b = 0; b < report.histogram.counts.size(); ++b)
        os << fmt(report.histogram.edges[b]) << "," << fmt(report.histogram.edges[b + 1]) << ","
           << report.histogram.counts[b] << "\n";
}

void write_outputs(const ExperimentReport& report, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    auto open = [&](const char* name) {
        std::ofstream os(fs::path(out_dir) / name, std::ios::binary);
        if (!os) throw std::runtime_error(std::string("cannot write ") + name);
        return os;
    };
    {
        auto os = open("report.json");
        write_report_json(report, os);
    }
    {
        auto os = open("replications.csv");
        write_replications_csv(report, os);
    }
    {
        auto os = open("histogram.csv");
        write_histogram_csv(report, os);
    }
    {
        auto os = open("manifest.txt");
        write_manifest(report.config, os);
    }
    {
        auto os = open("timing.txt");
        os << "wall_seconds = " << fmt(report.wall_seconds) << "\n";
    }
}

} // namespace fwwave::montecarlo
