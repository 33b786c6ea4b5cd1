#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "nkc/graph/digraph.hpp"
#include "nkc/rng.hpp"

namespace nkc::graph {

/// Stratified sampling configuration: nodes are ranked by total degree
/// (ties by id) and split into `strata` equal-count quantiles; each
/// stratum contributes `per_stratum` samples.
struct SamplingPlan {
    int strata = 12;
    int per_stratum = 1;
    std::uint64_t seed = 0;
};

/// edges / nodes; equals both the mean in-degree and the mean out-degree.
double mean_degree(const DirectedGraph& g);

enum class Direction { in, out };

/// Adjusted Fisher-Pearson sample skewness (G1) of the degree
/// distribution. Throws std::domain_error when the variance is zero and
/// std::invalid_argument for fewer than 3 nodes.
double degree_skewness(const DirectedGraph& g, Direction direction);

struct PathStats {
    /// Mean shortest-path distance over connected ordered pairs; absent
    /// when no ordered pair is connected.
    std::optional<double> mean_path;
    /// Fraction of ordered pairs (s, t), s != t, with a directed s->t path.
    double connected_fraction = 0.0;
};

PathStats path_length_exact(const DirectedGraph& g);
PathStats path_length_sampled(const DirectedGraph& g, const SamplingPlan& plan);

/// Exact path stats via bitset BFS rows; much faster on small dense
/// graphs (memory is nodes^2 / 8). Used per-trial by the simulator.
PathStats path_length_exact_dense(
    const std::vector<std::vector<std::int32_t>>& out_adjacency);

struct MinCutStats {
    /// Mean over evaluated (s, t) pairs of the minimum s-t cut size
    /// (unit capacities); absent when no connected pair exists/was found.
    std::optional<double> mean_min_cut;
    std::size_t pairs_evaluated = 0;
    std::size_t no_path_resamples = 0;  // sampled mode diagnostics
    std::size_t slots_abandoned = 0;
};

MinCutStats mean_min_cut_exact(const DirectedGraph& g);
MinCutStats mean_min_cut_sampled(const DirectedGraph& g,
                                 const SamplingPlan& plan);

/// Quantile membership: strata in rank order, each holding node ids.
std::vector<std::vector<std::int32_t>> degree_strata(const DirectedGraph& g,
                                                     int strata);

/// Relative sampling error versus sample size, against exact values
/// computed on the same graph; replicates the calibration procedure used
/// to size the estimators.
struct CalibrationPoint {
    int per_stratum = 0;
    double path_rel_err = 0.0;
    double mincut_rel_err = 0.0;
};

struct CalibrationResult {
    double exact_path = 0.0;
    double exact_mincut = 0.0;
    std::vector<CalibrationPoint> points;
    std::optional<int> recommended_path;    // smallest size with err < 10%
    std::optional<int> recommended_mincut;
};

CalibrationResult calibrate_sampling(const DirectedGraph& g,
                                     const std::vector<int>& sizes,
                                     int repeats, std::uint64_t seed);

}  // namespace nkc::graph
