#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fwwave/sampler.hpp"
#include "fwwave/stats.hpp"
#include "fwwave/types.hpp"

namespace fwwave::montecarlo {

enum class ExperimentKind { temporal, rectangular };

/// Fully resolved description of one experiment. The flat key-value config
/// grammar (one `key = value` per line, `#` comments) round-trips through
/// the manifest: rerunning from a manifest reproduces outputs byte for byte.
struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::temporal;
    double h = 0.5;
    std::size_t n = 0;          // temporal grid size / rect spatial extent
    std::size_t m = 0;          // rect temporal extent
    double alpha = 0.0;         // rect time mesh exponent
    double c = 1.0;
    double sigma_vol = 1.0;
    std::size_t reps = 1;
    std::uint64_t master_seed = 0;
    bool with_c = false;        // also record c^ (h known) per replication
    bool with_p = false;        // also record p^ per replication
    std::string histogram_of;   // column name; default hurst_hat / c_rect_hat

    void validate() const;
    std::string histogram_column() const;
};

struct ColumnSummary {
    std::string name;
    stats::MomentSummary moments;
    std::vector<double> cumulants; // k-statistics k1..k4
};

struct ExperimentReport {
    ExperimentConfig config;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> records; // records[r][col], replication-major
    std::vector<ColumnSummary> summaries;
    double ks_f_exact = 0.0;
    double ks_f_asym = 0.0;
    double ks_critical_1pct = 0.0;
    double expected_s = 0.0;       // exact mean of S (model diagonal mean)
    double wick_v_variance = 0.0;  // exact E[V^2]
    double asymptotic_sd = 0.0;    // asymptotic standardization divisor
    std::string histogram_column;
    stats::Histogram histogram;
    double wall_seconds = 0.0;     // console/timing sidecar only, never in report.json
};

/// Builds the covariance model once, runs reps independent replications
/// (partitioned over jobs workers; 0 = hardware concurrency), and reduces
/// deterministically in replication order. Output is identical for any
/// worker count.
ExperimentReport run_experiment(const ExperimentConfig& config, unsigned jobs = 0);

/// Flat key-value config I/O. parse_config accepts exactly the manifest
/// grammar; unknown keys are rejected except tool_version (echoed metadata).
ExperimentConfig parse_config(std::istream& is);
ExperimentConfig parse_config_file(const std::string& path);
void write_manifest(const ExperimentConfig& config, std::ostream& os);

void write_report_json(const ExperimentReport& report, std::ostream& os);
void write_replications_csv(const ExperimentReport& report, std::ostream& os);
void write_histogram_csv(const ExperimentReport& report, std::ostream& os);

/// Writes report.json, replications.csv, histogram.csv, manifest.txt and
/// timing.txt under out_dir (created when missing).
void write_outputs(const ExperimentReport& report, const std::string& out_dir);

} // namespace fwwave::montecarlo
