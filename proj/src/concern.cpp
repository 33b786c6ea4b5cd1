#include "nkc/concern.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace nkc {

std::vector<Agent> build_concerns(const NkModel& model) {
    std::vector<Agent> agents;
    agents.reserve(2 * static_cast<std::size_t>(model.n()));
    for (int i = 0; i < model.n(); ++i) {
        Agent a;
        a.home_locus = i;
        a.concern.push_back(i);
        for (auto nb : model.neighbors(i)) a.concern.push_back(nb);
        std::sort(a.concern.begin(), a.concern.end());
        for (int copy = 0; copy < 2; ++copy) {
            a.id = 2 * i + copy;
            agents.push_back(a);
        }
    }
    return agents;
}

void rewire(std::vector<Agent>& agents, int n_loci, double p, Rng& rng,
            bool home_exempt) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("rewire probability outside [0,1]");
    for (Agent& a : agents) {
        auto& c = a.concern;
        for (std::size_t slot = 0; slot < c.size(); ++slot) {
            if (home_exempt && c[slot] == a.home_locus) continue;
            if (!(uniform_unit(rng) < p)) continue;
            std::int32_t fresh;
            bool member;
            do {
                fresh = static_cast<std::int32_t>(uniform_below(rng, n_loci));
                member = false;
                for (std::int32_t l : c) member |= (l == fresh);
            } while (member);
            c[slot] = fresh;
        }
        std::sort(c.begin(), c.end());
    }
}

ConcernNetwork build_graph(std::vector<Agent> agents, int n_loci,
                           double rewire_p) {
    ConcernNetwork net;
    net.n_loci = n_loci;
    net.rewire_p = rewire_p;
    net.agents = std::move(agents);
    const int m = net.size();

    net.locus_agents.assign(n_loci, {});
    for (const Agent& a : net.agents) {
        for (std::int32_t l : a.concern) {
            if (l < 0 || l >= n_loci)
                throw std::invalid_argument("concern locus out of range");
            net.locus_agents[l].push_back(a.id);
        }
    }

    // Shared-locus neighbors, deduplicated with a visit stamp.
    net.adj.assign(m, {});
    std::vector<int> stamp(m, -1);
    for (int a = 0; a < m; ++a) {
        for (std::int32_t l : net.agents[a].concern) {
            for (std::int32_t b : net.locus_agents[l]) {
                if (b != a && stamp[b] != a) {
                    stamp[b] = a;
                    net.adj[a].push_back(b);
                }
            }
        }
        std::sort(net.adj[a].begin(), net.adj[a].end());
        net.edge_count += net.adj[a].size();
    }
    net.edge_count /= 2;
    return net;
}

void write_edge_list(const ConcernNetwork& net, std::ostream& out) {
    for (int a = 0; a < net.size(); ++a)
        for (std::int32_t b : net.adj[a]) out << a << ' ' << b << '\n';
}

void write_agents(const ConcernNetwork& net, std::ostream& out) {
    out << "agents " << net.size() << " loci " << net.n_loci << " rewire_p "
        << net.rewire_p << '\n';
    for (const Agent& a : net.agents) {
        out << "agent " << a.id << " home " << a.home_locus << " concern";
        for (std::int32_t l : a.concern) out << ' ' << l;
        out << '\n';
    }
}

}  // namespace nkc
