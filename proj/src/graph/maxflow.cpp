#include "nkc/graph/maxflow.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace nkc::graph {

Dinic::Dinic(int nodes) : nodes_(nodes), adj_(nodes), level_(nodes), iter_(nodes) {
    if (nodes < 0) throw std::invalid_argument("negative node count");
}

Dinic::Dinic(const DirectedGraph& g) : Dinic(g.nodes) {
    for (int u = 0; u < g.nodes; ++u)
        for (auto v : g.out[u]) add_edge(u, v, 1);
}

void Dinic::add_edge(int from, int to, std::int64_t capacity) {
    adj_[from].push_back({static_cast<std::int32_t>(to),
                          static_cast<std::int32_t>(adj_[to].size()), capacity,
                          0});
    adj_[to].push_back({static_cast<std::int32_t>(from),
                        static_cast<std::int32_t>(adj_[from].size() - 1), 0,
                        0});
}

bool Dinic::bfs_levels(int s, int t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::vector<std::int32_t> queue;
    queue.reserve(nodes_);
    level_[s] = 0;
    queue.push_back(s);
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const int v = queue[head];
        for (const Edge& e : adj_[v]) {
            if (e.cap - e.flow > 0 && level_[e.to] < 0) {
                level_[e.to] = level_[v] + 1;
                queue.push_back(e.to);
            }
        }
    }
    return level_[t] >= 0;
}

std::int64_t Dinic::push(int v, int t, std::int64_t limit) {
    if (v == t) return limit;
    for (std::int32_t& i = iter_[v]; i < static_cast<std::int32_t>(adj_[v].size()); ++i) {
        Edge& e = adj_[v][i];
        if (e.cap - e.flow <= 0 || level_[e.to] != level_[v] + 1) continue;
        const std::int64_t d = push(e.to, t, std::min(limit, e.cap - e.flow));
        if (d > 0) {
            e.flow += d;
            adj_[e.to][e.rev].flow -= d;
            return d;
        }
    }
    return 0;
}

std::int64_t Dinic::max_flow(int source, int sink) {
    if (source == sink) throw std::invalid_argument("source == sink");
    for (auto& edges : adj_)
        for (Edge& e : edges) e.flow = 0;
    last_source_ = source;
    std::int64_t total = 0;
    while (bfs_levels(source, sink)) {
        std::fill(iter_.begin(), iter_.end(), 0);
        while (std::int64_t d = push(source, sink,
                                     std::numeric_limits<std::int64_t>::max()))
            total += d;
    }
    return total;
}

std::vector<char> Dinic::min_cut_side() const {
    std::vector<char> seen(nodes_, 0);
    if (last_source_ < 0) return seen;
    std::vector<std::int32_t> queue{static_cast<std::int32_t>(last_source_)};
    seen[last_source_] = 1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        for (const Edge& e : adj_[queue[head]]) {
            if (e.cap - e.flow > 0 && !seen[e.to]) {
                seen[e.to] = 1;
                queue.push_back(e.to);
            }
        }
    }
    return seen;
}

}  // namespace nkc::graph
