#pragma once

// Independent reference implementations used as test oracles. These
// deliberately avoid the library's kernels, incremental evaluator and
// graph algorithms: plain loops, separate algorithm families.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <vector>

#include "nkc/concern.hpp"
#include "nkc/graph/digraph.hpp"
#include "nkc/landscape.hpp"

namespace oracle {

/// Locus payoff by direct table lookup from the model's stored data.
inline double locus_value(const nkc::NkModel& m, const nkc::Solution& s,
                          int locus) {
    std::size_t index = static_cast<std::size_t>(s.bits[locus]);
    const auto nb = m.neighbors(locus);
    for (int d = 0; d < m.k(); ++d)
        index |= static_cast<std::size_t>(s.bits[nb[d]]) << (d + 1);
    return m.table(locus)[index];
}

/// Plain sequential mean of locus values.
inline double fitness(const nkc::NkModel& m, const nkc::Solution& s) {
    double sum = 0.0;
    for (int i = 0; i < m.n(); ++i) sum += locus_value(m, s, i);
    return sum / m.n();
}

inline double local_score(const nkc::NkModel& m, const nkc::Solution& s,
                          const std::vector<std::int32_t>& loci) {
    double sum = 0.0;
    for (auto l : loci) sum += locus_value(m, s, l);
    return sum / static_cast<double>(loci.size());
}

/// Exhaustive best single flip under `score`; strict improvement, lowest
/// locus on ties. Returns -1 when no flip improves.
template <class ScoreFn>
int best_flip(const nkc::Solution& s, const std::vector<std::int32_t>& flips,
              ScoreFn&& score) {
    int best = -1;
    double best_score = score(s);
    for (auto f : flips) {
        nkc::Solution t = s;
        t.bits[f] ^= 1;
        const double v = score(t);
        if (v > best_score) {
            best_score = v;
            best = f;
        }
    }
    return best;
}

/// Pairwise concern-intersection adjacency (quadratic, by definition).
inline std::vector<std::vector<std::int32_t>> coaffiliation(
    const std::vector<nkc::Agent>& agents) {
    const int m = static_cast<int>(agents.size());
    std::vector<std::vector<std::int32_t>> adj(m);
    for (int a = 0; a < m; ++a) {
        for (int b = 0; b < m; ++b) {
            if (a == b) continue;
            bool shares = false;
            for (auto x : agents[a].concern)
                for (auto y : agents[b].concern) shares |= (x == y);
            if (shares) adj[a].push_back(b);
        }
    }
    return adj;
}

/// All-pairs shortest paths by Floyd-Warshall (different algorithm family
/// from the BFS implementations under test).
struct PathResult {
    double mean_path = 0.0;
    double connected_fraction = 0.0;
    bool any_connected = false;
};

inline PathResult floyd_warshall_paths(const nkc::graph::DirectedGraph& g) {
    const int n = g.nodes;
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> d(n, std::vector<double>(n, inf));
    for (int v = 0; v < n; ++v) d[v][v] = 0.0;
    for (int u = 0; u < n; ++u)
        for (auto v : g.out[u]) d[u][v] = 1.0;
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    PathResult r;
    double sum = 0.0;
    std::int64_t connected = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j || d[i][j] == inf) continue;
            sum += d[i][j];
            ++connected;
        }
    if (connected > 0) {
        r.any_connected = true;
        r.mean_path = sum / static_cast<double>(connected);
    }
    r.connected_fraction =
        n > 1 ? static_cast<double>(connected) / (static_cast<double>(n) * (n - 1))
              : 0.0;
    return r;
}

/// Edmonds-Karp max flow (BFS augmenting paths on a capacity matrix);
/// independent of the Dinic implementation under test.
inline std::int64_t edmonds_karp(const nkc::graph::DirectedGraph& g, int s,
                                 int t) {
    const int n = g.nodes;
    std::vector<std::vector<std::int64_t>> cap(
        n, std::vector<std::int64_t>(n, 0));
    for (int u = 0; u < n; ++u)
        for (auto v : g.out[u]) cap[u][v] += 1;
    std::int64_t flow = 0;
    for (;;) {
        std::vector<int> parent(n, -1);
        parent[s] = s;
        std::queue<int> q;
        q.push(s);
        while (!q.empty() && parent[t] < 0) {
            const int u = q.front();
            q.pop();
            for (int v = 0; v < n; ++v) {
                if (cap[u][v] > 0 && parent[v] < 0) {
                    parent[v] = u;
                    q.push(v);
                }
            }
        }
        if (parent[t] < 0) return flow;
        std::int64_t push = std::numeric_limits<std::int64_t>::max();
        for (int v = t; v != s; v = parent[v])
            push = std::min(push, cap[parent[v]][v]);
        for (int v = t; v != s; v = parent[v]) {
            cap[parent[v]][v] -= push;
            cap[v][parent[v]] += push;
        }
        flow += push;
    }
}

/// Adjusted Fisher-Pearson skewness via explicit z-scores (textbook form).
inline double skewness_g1_adjusted(const std::vector<double>& xs) {
    const double n = static_cast<double>(xs.size());
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= n;
    double s2 = 0.0;
    for (double x : xs) s2 += (x - mean) * (x - mean);
    const double sd = std::sqrt(s2 / (n - 1.0));  // sample std
    double zsum = 0.0;
    for (double x : xs) zsum += std::pow((x - mean) / sd, 3.0);
    return n / ((n - 1.0) * (n - 2.0)) * zsum;
}

}  // namespace oracle
