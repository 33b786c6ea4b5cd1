#include "nkc/graph/metrics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "nkc/graph/maxflow.hpp"

namespace nkc::graph {

namespace {

void require_nonempty(const DirectedGraph& g) {
    if (g.nodes <= 0) throw std::invalid_argument("empty graph");
}

}  // namespace

double mean_degree(const DirectedGraph& g) {
    require_nonempty(g);
    return static_cast<double>(g.edges) / g.nodes;
}

double degree_skewness(const DirectedGraph& g, Direction direction) {
    require_nonempty(g);
    const int n = g.nodes;
    if (n < 3)
        throw std::invalid_argument("skewness needs at least 3 nodes");
    std::vector<double> deg(n);
    for (int v = 0; v < n; ++v)
        deg[v] = direction == Direction::out
                     ? static_cast<double>(g.out_degree(v))
                     : static_cast<double>(g.in_degree[v]);
    const double mean = std::accumulate(deg.begin(), deg.end(), 0.0) / n;
    double m2 = 0.0, m3 = 0.0;
    for (double d : deg) {
        const double c = d - mean;
        m2 += c * c;
        m3 += c * c * c;
    }
    m2 /= n;
    m3 /= n;
    if (m2 == 0.0)
        throw std::domain_error("skewness undefined: zero degree variance");
    const double g1 = m3 / std::pow(m2, 1.5);
    return g1 * std::sqrt(static_cast<double>(n) * (n - 1)) / (n - 2);
}

namespace {

/// One BFS; appends distance counts into sum/reached.
void bfs_accumulate(const DirectedGraph& g, int source,
                    std::vector<std::int32_t>& dist,
                    std::vector<std::int32_t>& queue, std::int64_t& sum,
                    std::int64_t& reached) {
    std::fill(dist.begin(), dist.end(), -1);
    queue.clear();
    dist[source] = 0;
    queue.push_back(source);
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const int v = queue[head];
        for (auto w : g.out[v]) {
            if (dist[w] < 0) {
                dist[w] = dist[v] + 1;
                sum += dist[w];
                ++reached;
                queue.push_back(w);
            }
        }
    }
}

PathStats path_stats_from(std::int64_t sum, std::int64_t reached,
                          std::int64_t pair_slots) {
    PathStats st;
    st.connected_fraction =
        pair_slots > 0 ? static_cast<double>(reached) / pair_slots : 0.0;
    if (reached > 0)
        st.mean_path = static_cast<double>(sum) / static_cast<double>(reached);
    return st;
}

}  // namespace

PathStats path_length_exact(const DirectedGraph& g) {
    require_nonempty(g);
    std::vector<std::int32_t> dist(g.nodes), queue;
    queue.reserve(g.nodes);
    std::int64_t sum = 0, reached = 0;
    for (int s = 0; s < g.nodes; ++s)
        bfs_accumulate(g, s, dist, queue, sum, reached);
    return path_stats_from(sum, reached,
                           static_cast<std::int64_t>(g.nodes) * (g.nodes - 1));
}

std::vector<std::vector<std::int32_t>> degree_strata(const DirectedGraph& g,
                                                     int strata) {
    require_nonempty(g);
    if (strata < 1) throw std::invalid_argument("strata must be >= 1");
    std::vector<std::int32_t> order(g.nodes);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
        const int da = g.total_degree(a), db = g.total_degree(b);
        return da != db ? da < db : a < b;
    });
    std::vector<std::vector<std::int32_t>> out(strata);
    for (int c = 0; c < strata; ++c) {
        const std::size_t lo = static_cast<std::size_t>(g.nodes) * c / strata;
        const std::size_t hi =
            static_cast<std::size_t>(g.nodes) * (c + 1) / strata;
        out[c].assign(order.begin() + lo, order.begin() + hi);
    }
    return out;
}

namespace {

/// Up to `want` distinct nodes from one stratum, by partial Fisher-Yates.
std::vector<std::int32_t> sample_stratum(std::vector<std::int32_t> pool,
                                         int want, Rng& rng) {
    const int take = std::min<int>(want, static_cast<int>(pool.size()));
    for (int i = 0; i < take; ++i) {
        const auto j =
            i + static_cast<int>(uniform_below(rng, pool.size() - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(take);
    return pool;
}

void validate(const SamplingPlan& plan) {
    if (plan.strata < 1 || plan.per_stratum < 1)
        throw std::invalid_argument("sampling plan needs strata >= 1 and "
                                    "per_stratum >= 1");
}

}  // namespace

PathStats path_length_sampled(const DirectedGraph& g,
                              const SamplingPlan& plan) {
    require_nonempty(g);
    validate(plan);
    Rng rng(derive_seed(plan.seed, 0x70617468));
    const auto strata = degree_strata(g, plan.strata);
    std::vector<std::int32_t> dist(g.nodes), queue;
    queue.reserve(g.nodes);
    std::int64_t sum = 0, reached = 0, sources = 0;
    for (const auto& stratum : strata) {
        for (auto s : sample_stratum(stratum, plan.per_stratum, rng)) {
            bfs_accumulate(g, s, dist, queue, sum, reached);
            ++sources;
        }
    }
    return path_stats_from(sum, reached, sources * (g.nodes - 1));
}

PathStats path_length_exact_dense(
    const std::vector<std::vector<std::int32_t>>& out_adjacency) {
    const int n = static_cast<int>(out_adjacency.size());
    if (n <= 0) throw std::invalid_argument("empty graph");
    const int words = (n + 63) / 64;
    std::vector<std::uint64_t> rows(static_cast<std::size_t>(n) * words, 0);
    for (int v = 0; v < n; ++v)
        for (auto w : out_adjacency[v])
            rows[static_cast<std::size_t>(v) * words + w / 64] |=
                std::uint64_t{1} << (w % 64);

    std::vector<std::uint64_t> frontier(words), visited(words), next(words);
    std::int64_t sum = 0, reached = 0;
    for (int s = 0; s < n; ++s) {
        const std::uint64_t* row = rows.data() + static_cast<std::size_t>(s) * words;
        std::copy(row, row + words, frontier.begin());
        std::copy(row, row + words, visited.begin());
        visited[s / 64] |= std::uint64_t{1} << (s % 64);
        // The self bit may sit in the first frontier; mask it out.
        frontier[s / 64] &= ~(std::uint64_t{1} << (s % 64));
        std::int64_t d = 1;
        while (true) {
            std::int64_t count = 0;
            for (int w = 0; w < words; ++w) count += std::popcount(frontier[w]);
            if (count == 0) break;
            sum += d * count;
            reached += count;
            std::fill(next.begin(), next.end(), 0);
            for (int w = 0; w < words; ++w) {
                std::uint64_t bits = frontier[w];
                while (bits) {
                    const int v = w * 64 + std::countr_zero(bits);
                    bits &= bits - 1;
                    const std::uint64_t* vr =
                        rows.data() + static_cast<std::size_t>(v) * words;
                    for (int x = 0; x < words; ++x) next[x] |= vr[x];
                }
            }
            for (int w = 0; w < words; ++w) {
                next[w] &= ~visited[w];
                visited[w] |= next[w];
            }
            frontier.swap(next);
            ++d;
        }
    }
    return path_stats_from(sum, reached,
                           static_cast<std::int64_t>(n) * (n - 1));
}

MinCutStats mean_min_cut_exact(const DirectedGraph& g) {
    require_nonempty(g);
    Dinic dinic(g);
    std::vector<std::int32_t> dist(g.nodes), queue;
    queue.reserve(g.nodes);
    MinCutStats st;
    std::int64_t sum = 0;
    for (int s = 0; s < g.nodes; ++s) {
        std::int64_t dsum = 0, dreached = 0;
        bfs_accumulate(g, s, dist, queue, dsum, dreached);
        for (int t = 0; t < g.nodes; ++t) {
            if (t == s || dist[t] < 0) continue;
            sum += dinic.max_flow(s, t);
            ++st.pairs_evaluated;
        }
    }
    if (st.pairs_evaluated > 0)
        st.mean_min_cut = static_cast<double>(sum) /
                          static_cast<double>(st.pairs_evaluated);
    return st;
}

MinCutStats mean_min_cut_sampled(const DirectedGraph& g,
                                 const SamplingPlan& plan) {
    require_nonempty(g);
    validate(plan);
    Rng rng(derive_seed(plan.seed, 0x6d696e63));
    const auto strata = degree_strata(g, plan.strata);
    Dinic dinic(g);
    MinCutStats st;
    std::int64_t sum = 0;
    const int total = plan.strata * plan.per_stratum;
    constexpr int kMaxTries = 64;
    for (int i = 0; i < total; ++i) {
        const int s_str = i % plan.strata;
        const int t_str = (s_str + 1 + i / plan.strata) % plan.strata;
        const auto& sp = strata[s_str];
        const auto& tp = strata[t_str];
        if (sp.empty() || tp.empty()) {
            ++st.slots_abandoned;
            continue;
        }
        bool done = false;
        for (int attempt = 0; attempt < kMaxTries && !done; ++attempt) {
            const auto s = sp[uniform_below(rng, sp.size())];
            const auto t = tp[uniform_below(rng, tp.size())];
            if (s == t) continue;
            const std::int64_t flow = dinic.max_flow(s, t);
            if (flow <= 0) {
                ++st.no_path_resamples;
                continue;
            }
            sum += flow;
            ++st.pairs_evaluated;
            done = true;
        }
        if (!done) ++st.slots_abandoned;
    }
    if (st.pairs_evaluated > 0)
        st.mean_min_cut = static_cast<double>(sum) /
                          static_cast<double>(st.pairs_evaluated);
    return st;
}

CalibrationResult calibrate_sampling(const DirectedGraph& g,
                                     const std::vector<int>& sizes,
                                     int repeats, std::uint64_t seed) {
    if (repeats < 1) throw std::invalid_argument("repeats must be >= 1");
    CalibrationResult result;
    const PathStats exact_path = path_length_exact(g);
    const MinCutStats exact_cut = mean_min_cut_exact(g);
    if (!exact_path.mean_path || !exact_cut.mean_min_cut)
        throw std::domain_error("calibration needs a graph with connected pairs");
    result.exact_path = *exact_path.mean_path;
    result.exact_mincut = *exact_cut.mean_min_cut;
    for (int size : sizes) {
        CalibrationPoint pt;
        pt.per_stratum = size;
        double path_err = 0.0, cut_err = 0.0;
        for (int r = 0; r < repeats; ++r) {
            SamplingPlan plan{12, size, derive_seed(seed, (static_cast<std::uint64_t>(size) << 20) + r)};
            const auto ps = path_length_sampled(g, plan);
            const auto cs = mean_min_cut_sampled(g, plan);
            path_err += ps.mean_path
                            ? std::abs(*ps.mean_path - result.exact_path) /
                                  result.exact_path
                            : 1.0;
            cut_err += cs.mean_min_cut
                           ? std::abs(*cs.mean_min_cut - result.exact_mincut) /
                                 result.exact_mincut
                           : 1.0;
        }
        pt.path_rel_err = path_err / repeats;
        pt.mincut_rel_err = cut_err / repeats;
        result.points.push_back(pt);
        if (!result.recommended_path && pt.path_rel_err < 0.10)
            result.recommended_path = size;
        if (!result.recommended_mincut && pt.mincut_rel_err < 0.10)
            result.recommended_mincut = size;
    }
    return result;
}

}  // namespace nkc::graph
