#include "nkc/graph/digraph.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace nkc::graph {

std::string DirectedGraph::label(int v) const {
    if (v < 0 || v >= nodes) throw std::out_of_range("node id");
    return labels.empty() ? std::to_string(v) : labels[v];
}

DirectedGraph from_edges(
    int nodes, const std::vector<std::pair<std::int32_t, std::int32_t>>& edges,
    BuildReport* report) {
    if (nodes < 0) throw std::invalid_argument("negative node count");
    DirectedGraph g;
    g.nodes = nodes;
    g.out.assign(nodes, {});
    g.in_degree.assign(nodes, 0);
    BuildReport rep;
    for (auto [u, v] : edges) {
        if (u < 0 || u >= nodes || v < 0 || v >= nodes)
            throw std::invalid_argument("edge endpoint out of range");
        if (u == v) {
            ++rep.self_loops_dropped;
            continue;
        }
        g.out[u].push_back(v);
    }
    for (int u = 0; u < nodes; ++u) {
        auto& a = g.out[u];
        std::sort(a.begin(), a.end());
        const auto last = std::unique(a.begin(), a.end());
        rep.duplicates_dropped += a.end() - last;
        a.erase(last, a.end());
        g.edges += a.size();
        for (auto v : a) ++g.in_degree[v];
    }
    if (report) *report = rep;
    return g;
}

DirectedGraph read_edge_list(std::istream& in, BuildReport* report) {
    std::unordered_map<std::string, std::int32_t> ids;
    std::vector<std::string> labels;
    std::vector<std::pair<std::int32_t, std::int32_t>> edges;
    auto intern = [&](const std::string& name) {
        auto [it, fresh] =
            ids.emplace(name, static_cast<std::int32_t>(labels.size()));
        if (fresh) labels.push_back(name);
        return it->second;
    };
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        std::string a, b, extra;
        if (!(ls >> a)) continue;          // blank
        if (a[0] == '#') continue;         // comment
        if (!(ls >> b) || (ls >> extra))
            throw std::runtime_error("edge list line " + std::to_string(lineno) +
                                     ": expected 'src dst'");
        const auto src = intern(a);  // sequenced: ids follow appearance order
        const auto dst = intern(b);
        edges.emplace_back(src, dst);
    }
    DirectedGraph g =
        from_edges(static_cast<int>(labels.size()), edges, report);
    g.labels = std::move(labels);
    return g;
}

void write_edge_list(const DirectedGraph& g, std::ostream& out) {
    for (int u = 0; u < g.nodes; ++u)
        for (auto v : g.out[u]) out << g.label(u) << ' ' << g.label(v) << '\n';
}

}  // namespace nkc::graph
