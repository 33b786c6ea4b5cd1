#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace nkc::graph {

/// Directed graph with unit edge weights. Self-loops and duplicate edges
/// are rejected by the builders; adjacency is sorted.
struct DirectedGraph {
    int nodes = 0;
    std::size_t edges = 0;
    std::vector<std::vector<std::int32_t>> out;
    std::vector<std::int32_t> in_degree;
    std::vector<std::string> labels;  // empty when nodes are anonymous

    int out_degree(int v) const { return static_cast<int>(out[v].size()); }
    int total_degree(int v) const {
        return out_degree(v) + static_cast<int>(in_degree[v]);
    }
    std::string label(int v) const;
};

/// Build from an edge list; self-loops and duplicates are dropped and
/// counted instead of raising, since real edge-list files contain them.
struct BuildReport {
    std::size_t self_loops_dropped = 0;
    std::size_t duplicates_dropped = 0;
};

DirectedGraph from_edges(
    int nodes, const std::vector<std::pair<std::int32_t, std::int32_t>>& edges,
    BuildReport* report = nullptr);

/// Read `src dst` lines (whitespace- or comma-separated; `#` comments and
/// blank lines skipped). Node ids may be arbitrary strings; they are mapped
/// to dense indices in first-appearance order and kept as labels.
DirectedGraph read_edge_list(std::istream& in, BuildReport* report = nullptr);

void write_edge_list(const DirectedGraph& g, std::ostream& out);

}  // namespace nkc::graph
