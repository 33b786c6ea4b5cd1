#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "nkc/landscape.hpp"
#include "nkc/rng.hpp"

namespace nkc {

/// One simulated collaborator: anchored at the locus it was created from,
/// concerned with k+1 loci (kept sorted).
struct Agent {
    int id = 0;
    std::int32_t home_locus = 0;
    std::vector<std::int32_t> concern;
};

/// Two agents per locus (ids 2i and 2i+1, home i), each initially
/// concerned with the locus and its k model neighbors.
std::vector<Agent> build_concerns(const NkModel& model);

/// Per-slot rewiring: every concern locus is independently replaced with
/// probability p by a uniform locus outside the agent's current concern.
/// With home_exempt the anchor locus never moves (the home is still never
/// *removed* by replacement of other slots either way). Concern size is
/// preserved. Throws if p is outside [0,1].
void rewire(std::vector<Agent>& agents, int n_loci, double p, Rng& rng,
            bool home_exempt);

/// Agent-agent co-affiliation graph: an undirected edge joins two agents
/// iff their concerns share at least one locus.
struct ConcernNetwork {
    int n_loci = 0;
    double rewire_p = 0.0;
    std::vector<Agent> agents;
    std::vector<std::vector<std::int32_t>> adj;           // sorted, symmetric
    std::vector<std::vector<std::int32_t>> locus_agents;  // locus -> agent ids
    std::size_t edge_count = 0;  // undirected

    int size() const { return static_cast<int>(agents.size()); }
    int degree(int agent) const { return static_cast<int>(adj[agent].size()); }
    double mean_degree() const {
        return agents.empty() ? 0.0
                              : 2.0 * static_cast<double>(edge_count) /
                                    static_cast<double>(agents.size());
    }
};

ConcernNetwork build_graph(std::vector<Agent> agents, int n_loci,
                           double rewire_p);

/// Directed edge list (each undirected edge in both directions)
/// consumable by the graph-metrics tools.
void write_edge_list(const ConcernNetwork& net, std::ostream& out);

/// Structured text dump of agents and concerns for audits.
void write_agents(const ConcernNetwork& net, std::ostream& out);

}  // namespace nkc
