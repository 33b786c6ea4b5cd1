#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "nkc/concern.hpp"
#include "nkc/graph/metrics.hpp"
#include "oracles.hpp"

using namespace nkc;

TEST_CASE("build_concerns duplicates every locus agent") {
    const NkModel m = NkModel::generate(250, 7, 5150);
    const auto agents = build_concerns(m);
    REQUIRE(agents.size() == 500);
    for (int i = 0; i < 250; ++i) {
        const Agent& a = agents[2 * i];
        const Agent& b = agents[2 * i + 1];
        CHECK(a.id == 2 * i);
        CHECK(b.id == 2 * i + 1);
        CHECK(a.home_locus == i);
        CHECK(b.home_locus == i);
        CHECK(a.concern.size() == 8);
        CHECK(a.concern == b.concern);
        CHECK(std::binary_search(a.concern.begin(), a.concern.end(), i));
        // Concern = home + model neighbors.
        std::set<std::int32_t> expected{static_cast<std::int32_t>(i)};
        for (auto nb : m.neighbors(i)) expected.insert(nb);
        CHECK(std::set<std::int32_t>(a.concern.begin(), a.concern.end()) ==
              expected);
    }
}

TEST_CASE("n=1 k=0 yields two agents concerned with locus 0") {
    const NkModel m = NkModel::generate(1, 0, 1);
    const auto agents = build_concerns(m);
    REQUIRE(agents.size() == 2);
    for (const Agent& a : agents) {
        CHECK(a.home_locus == 0);
        CHECK(a.concern == std::vector<std::int32_t>{0});
    }
}

TEST_CASE("rewire p=0 leaves concerns untouched") {
    const NkModel m = NkModel::generate(60, 4, 12);
    auto agents = build_concerns(m);
    const auto before = agents;
    Rng rng(9);
    rewire(agents, m.n(), 0.0, rng, /*home_exempt=*/false);
    for (std::size_t i = 0; i < agents.size(); ++i)
        CHECK(agents[i].concern == before[i].concern);
}

TEST_CASE("rewire p=1 resamples every eligible slot") {
    const NkModel m = NkModel::generate(200, 6, 13);
    auto agents = build_concerns(m);
    const auto before = agents;
    Rng rng(10);
    SUBCASE("home exempt: home kept, most slots move") {
        rewire(agents, m.n(), 1.0, rng, /*home_exempt=*/true);
        for (std::size_t i = 0; i < agents.size(); ++i) {
            const Agent& a = agents[i];
            CHECK(a.concern.size() == before[i].concern.size());
            CHECK(std::binary_search(a.concern.begin(), a.concern.end(),
                                     a.home_locus));
            std::set<std::int32_t> c(a.concern.begin(), a.concern.end());
            CHECK(c.size() == a.concern.size());  // still distinct
        }
        // Duplicate pairs should rarely agree after full rewiring.
        int identical = 0;
        for (int i = 0; i < m.n(); ++i)
            identical += agents[2 * i].concern == agents[2 * i + 1].concern;
        CHECK(identical <= 2);
    }
    SUBCASE("home not exempt: home may move too") {
        rewire(agents, m.n(), 1.0, rng, /*home_exempt=*/false);
        int home_moved = 0;
        for (const Agent& a : agents)
            home_moved += !std::binary_search(a.concern.begin(),
                                              a.concern.end(), a.home_locus);
        CHECK(home_moved > 0);
    }
}

TEST_CASE("rewire validates p") {
    const NkModel m = NkModel::generate(5, 1, 2);
    auto agents = build_concerns(m);
    Rng rng(1);
    CHECK_THROWS_AS(rewire(agents, m.n(), -0.1, rng, true),
                    std::invalid_argument);
    CHECK_THROWS_AS(rewire(agents, m.n(), 1.5, rng, true),
                    std::invalid_argument);
}

TEST_CASE("adjacency equals the brute-force pairwise intersection test") {
    Rng rng(33);
    for (int round = 0; round < 6; ++round) {
        const int n = 10 + static_cast<int>(uniform_below(rng, 40));
        const int k = 1 + static_cast<int>(uniform_below(rng, 5));
        const NkModel m = NkModel::generate(n, k, rng());
        auto agents = build_concerns(m);
        rewire(agents, n, 0.2 * round, rng, round % 2 == 0);
        const auto expected = oracle::coaffiliation(agents);
        const ConcernNetwork net = build_graph(std::move(agents), n, 0.0);
        REQUIRE(net.adj.size() == expected.size());
        for (std::size_t a = 0; a < expected.size(); ++a)
            CHECK(net.adj[a] == expected[a]);
    }
}

TEST_CASE("two agents with disjoint concerns share no edge; duplicates at "
          "p=0 always do") {
    const NkModel m = NkModel::generate(100, 3, 71);
    auto agents = build_concerns(m);
    const ConcernNetwork net = build_graph(std::move(agents), 100, 0.0);
    for (int i = 0; i < 100; ++i) {
        const auto& adj = net.adj[2 * i];
        CHECK(std::binary_search(adj.begin(), adj.end(), 2 * i + 1));
    }
    for (int a = 0; a < net.size(); ++a) {
        CHECK(!std::binary_search(net.adj[a].begin(), net.adj[a].end(), a));
        for (auto b : net.adj[a]) {
            std::vector<std::int32_t> shared;
            std::set_intersection(net.agents[a].concern.begin(),
                                  net.agents[a].concern.end(),
                                  net.agents[b].concern.begin(),
                                  net.agents[b].concern.end(),
                                  std::back_inserter(shared));
            CHECK(!shared.empty());
            // Symmetry.
            CHECK(std::binary_search(net.adj[b].begin(), net.adj[b].end(), a));
        }
    }
}

TEST_CASE("graph construction is deterministic given seeds and p") {
    auto make = [](std::uint64_t model_seed, std::uint64_t rewire_seed,
                   double p) {
        const NkModel m = NkModel::generate(80, 5, model_seed);
        auto agents = build_concerns(m);
        Rng rng(rewire_seed);
        rewire(agents, m.n(), p, rng, false);
        return build_graph(std::move(agents), m.n(), p);
    };
    const auto a = make(4, 5, 0.5);
    const auto b = make(4, 5, 0.5);
    CHECK(a.adj == b.adj);
    const auto c = make(4, 6, 0.5);
    CHECK(a.adj != c.adj);
}

TEST_CASE("mean degree rises with rewiring probability (50-seed average)") {
    // The degree trend is what couples rewiring to the outcome
    // regressions; it requires home loci to participate in rewiring.
    // The rise saturates near p=0.5 (measured: ~115.0 -> ~116.0 -> ~115.8
    // at N=250, K=7), so rewired networks are compared against p=0.
    const double ps[] = {0.0, 0.5, 1.0};
    double means[3] = {0, 0, 0};
    const int seeds = 50;
    for (int s = 0; s < seeds; ++s) {
        const NkModel m = NkModel::generate(250, 7, 9000 + s);
        for (int pi = 0; pi < 3; ++pi) {
            auto agents = build_concerns(m);
            Rng rng(derive_seed(31337 + s, pi));
            rewire(agents, m.n(), ps[pi], rng, /*home_exempt=*/false);
            means[pi] +=
                build_graph(std::move(agents), m.n(), ps[pi]).mean_degree();
        }
    }
    for (double& v : means) v /= seeds;
    CHECK(means[1] > means[0]);
    CHECK(means[2] > means[0]);
}

TEST_CASE("rewiring moves degree far more than path length across seeds") {
    const int seeds = 50;
    std::vector<double> degree, path;
    for (int s = 0; s < seeds; ++s) {
        const NkModel m = NkModel::generate(250, 7, 500 + s);
        auto agents = build_concerns(m);
        Rng rng(derive_seed(1, s));
        rewire(agents, m.n(), 0.5, rng, /*home_exempt=*/false);
        const ConcernNetwork net = build_graph(std::move(agents), m.n(), 0.5);
        degree.push_back(net.mean_degree());
        path.push_back(*graph::path_length_exact_dense(net.adj).mean_path);
    }
    auto cv = [](const std::vector<double>& v) {
        double mean = 0;
        for (double x : v) mean += x;
        mean /= v.size();
        double ss = 0;
        for (double x : v) ss += (x - mean) * (x - mean);
        return std::sqrt(ss / (v.size() - 1)) / mean;
    };
    const double path_mean = [&] {
        double m = 0;
        for (double x : path) m += x;
        return m / path.size();
    }();
    CHECK(std::abs(path_mean - 1.766) <= 0.05 * 1.766);
    CHECK(cv(degree) > 5.0 * cv(path));
}

TEST_CASE("edge list export writes both directions") {
    const NkModel m = NkModel::generate(10, 2, 3);
    const ConcernNetwork net = build_graph(build_concerns(m), 10, 0.0);
    std::ostringstream out;
    write_edge_list(net, out);
    std::istringstream in(out.str());
    std::multiset<std::pair<int, int>> seen;
    int a, b;
    while (in >> a >> b) seen.emplace(a, b);
    CHECK(seen.size() == 2 * net.edge_count);
    for (const auto& [x, y] : seen) CHECK(seen.count({y, x}) == 1);
}

TEST_CASE("agent dump lists every agent with its concern") {
    const NkModel m = NkModel::generate(6, 1, 3);
    const ConcernNetwork net = build_graph(build_concerns(m), 6, 0.0);
    std::ostringstream out;
    write_agents(net, out);
    const std::string text = out.str();
    CHECK(text.find("agents 12 loci 6") != std::string::npos);
    CHECK(text.find("agent 11 home 5 concern") != std::string::npos);
}
