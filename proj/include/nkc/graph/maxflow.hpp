#pragma once

#include <cstdint>
#include <vector>

#include "nkc/graph/digraph.hpp"

namespace nkc::graph {

/// Dinic's max-flow over a fixed edge set with integer capacities.
/// Reusable: max_flow() resets flows, so one instance serves many
/// (s, t) queries on the same graph.
class Dinic {
public:
    explicit Dinic(int nodes);
    /// Builds a unit-capacity flow network from the graph's edges.
    explicit Dinic(const DirectedGraph& g);

    void add_edge(int from, int to, std::int64_t capacity);

    std::int64_t max_flow(int source, int sink);

    /// After max_flow(): nodes reachable from the source in the residual
    /// graph (the source side of a minimum cut).
    std::vector<char> min_cut_side() const;

private:
    struct Edge {
        std::int32_t to;
        std::int32_t rev;
        std::int64_t cap;
        std::int64_t flow;
    };
    bool bfs_levels(int s, int t);
    std::int64_t push(int v, int t, std::int64_t limit);

    int nodes_;
    int last_source_ = -1;
    std::vector<std::vector<Edge>> adj_;
    std::vector<std::int32_t> level_;
    std::vector<std::int32_t> iter_;
};

}  // namespace nkc::graph
