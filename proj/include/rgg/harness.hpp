#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "rgg/sampler.hpp"

namespace rgg {

enum class ExperimentKind { verify_bounds, threshold_sweep, diameter, strip_path, certify, tails };

enum class ReportFormat { csv, json };

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::verify_bounds;
    std::vector<std::int64_t> n_list;
    std::vector<std::string> r_list;  // tokens: "rc", "rc*X", "70sqrtlog", or a number
    int trials = 1;
    int pairs_per_trial = 10;
    std::uint64_t master_seed = 1;
    Model model = Model::uniform_n;
    int jobs = 0;  // 0 -> default_jobs()
    double ref_c = 1.0;
    // tails grid
    std::vector<std::int64_t> tail_summands{1, 10, 50, 200};
    std::vector<double> tail_deltas{0.1, 0.5, 1.0};
    std::int64_t tail_trials = 100000;
    double tail_rate = 1.0;
    // certify
    std::int64_t cert_k = 0;  // 0 -> randomized per trial
};

// Resolve an r token against n ("rc" = connectivity threshold,
// "rc*X" = multiple of it, "70sqrtlog" = 70 sqrt(log n), else a literal).
double resolve_r(const std::string& token, double n);

// RGG_JOBS environment variable, else hardware concurrency (capped at 8).
int default_jobs();

// Runs fn(0..count-1) on a worker pool. Results must go to per-index slots.
void parallel_for(std::int64_t count, int jobs, const std::function<void(std::int64_t)>& fn);

// Tabular experiment output. Rows are JSON objects with a fixed column set;
// the canonical hash covers every column except wall_ms, so reruns of the
// same config hash identically regardless of timing or job count.
struct Report {
    std::string experiment;
    nlohmann::json meta;
    std::vector<std::string> columns;
    std::vector<nlohmann::json> rows;
    nlohmann::json summary;
    bool failed = false;  // any acceptance-flagged violation

    std::uint64_t canonical_hash() const;
    void write_csv(std::ostream& out) const;
    void write_json(std::ostream& out) const;
    void write(std::ostream& out, ReportFormat fmt) const;
};

Report run_verify_bounds(const ExperimentConfig& cfg);
Report run_threshold_sweep(const ExperimentConfig& cfg);
Report run_diameter(const ExperimentConfig& cfg);
Report run_strip_path(const ExperimentConfig& cfg);
Report run_certify(const ExperimentConfig& cfg);
Report run_tails(const ExperimentConfig& cfg);
Report run_experiment(const ExperimentConfig& cfg);

// CLI entry point: subcommands gen, dist, verify, threshold, diameter,
// strip-path, certify, tails. Exit codes: 0 success, 1 flagged failure,
// 2 usage error.
int run_cli(const std::vector<std::string>& args);

}  // namespace rgg
