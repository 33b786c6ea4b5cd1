#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nkc/simulation.hpp"

namespace nkc {

/// Full factorial sweep: strategies x rewire values x trials.
struct SweepSpec {
    std::vector<double> rewire_values{0.0,   0.167, 0.333, 0.5,
                                      0.667, 0.833, 1.0};
    int trials = 100;
    std::vector<StrategyConfig> strategies;  // empty -> all five, sample 3
    int n = 250;
    int k = 7;
    int iterations = 300;
    std::uint64_t master_seed = 1;
    /// Share one NK model + network across strategies per (p, trial) for
    /// variance reduction; off by default (fresh world per trial).
    bool paired = false;
    int workers = 0;  // 0 -> hardware concurrency
    bool rewire_home_exempt = kRewireHomeExemptDefault;

    /// Paper-scale defaults (3500 trials).
    static SweepSpec paper();
    /// Small preset for quick runs: 20 trials, n=100, same k/iterations.
    static SweepSpec desk();

    std::vector<StrategyConfig> effective_strategies() const;
    /// Deterministic per-trial dynamics seed.
    std::uint64_t trial_seed(std::size_t strategy_index, std::size_t p_index,
                             int trial) const;
    /// Shared world stream for paired mode.
    std::uint64_t world_seed(std::size_t p_index, int trial) const;
};

struct TrialRow {
    StrategyKind strategy{};
    int n = 0;
    int k = 0;
    double rewire_p = 0.0;
    std::uint64_t seed = 0;
    double mean_degree = 0.0;
    double path_length = 0.0;
    double performance = 0.0;
    double efficiency = 0.0;
    int converged_at = 0;
};

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

/// Runs every (strategy, p, trial) cell, in parallel across worker
/// threads, and returns rows in canonical order (strategy-major, then p,
/// then trial). With a checkpoint path, finished rows are appended and
/// flushed as they complete and an interrupted sweep resumes by seed.
std::vector<TrialRow> run_sweep(const SweepSpec& spec,
                                const std::string& checkpoint_path = "",
                                const ProgressFn& progress = {});

void write_rows_csv(std::span<const TrialRow> rows, std::ostream& out);
std::vector<TrialRow> read_rows_csv(std::istream& in);

enum class Outcome { performance, efficiency };
const char* outcome_name(Outcome o);

/// Univariate OLS of z-scored outcome on z-scored mean degree over the
/// strategy's trials (all rewire values pooled). The slope is then the
/// Pearson correlation; the p-value comes from the two-sided t test.
struct RegressionResult {
    double slope = 0.0;
    double p_value = 1.0;
    std::size_t samples = 0;
};

RegressionResult standardized_degree_regression(std::span<const TrialRow> rows,
                                                StrategyKind strategy,
                                                Outcome outcome);

struct StrategySummary {
    StrategyKind strategy{};
    std::size_t trials = 0;
    double performance_mean = 0.0;
    std::optional<double> performance_se;
    double efficiency_mean = 0.0;
    std::optional<double> efficiency_se;
    double degree_mean = 0.0;
    double path_mean = 0.0;
};

/// Per-strategy means with standard errors at one rewire value.
std::vector<StrategySummary> summarize(std::span<const TrialRow> rows,
                                       double rewire_p);

struct NetworkSummary {
    std::size_t count = 0;
    double degree_mean = 0.0;
    double degree_cv = 0.0;
    double path_mean = 0.0;
    double path_cv = 0.0;
};

NetworkSummary network_summary(std::span<const TrialRow> rows);

/// One verification check against the published simulation results.
struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Checks reproduced values, rank orders, regression signs, network
/// statistics and convergence on a sweep's rows. `paper_scale` gates the
/// absolute-value comparisons that only hold at N=250/100 trials.
std::vector<CheckResult> verify_results(std::span<const TrialRow> rows,
                                        bool paper_scale);

}  // namespace nkc
