#include "nkc/simulation.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

#include "nkc/graph/metrics.hpp"
#include "nkc/text.hpp"

namespace nkc {

int convergence_step(const Trajectory& traj) {
    const auto& v = traj.mean_value;
    if (v.empty()) throw std::invalid_argument("empty trajectory");
    const double threshold = 0.99 * *std::max_element(v.begin(), v.end());
    for (std::size_t t = 0; t < v.size(); ++t)
        if (v[t] >= threshold) return static_cast<int>(t);
    return static_cast<int>(v.size()) - 1;  // not reachable
}

double performance_of(const Trajectory& traj) {
    if (traj.mean_value.empty()) throw std::invalid_argument("empty trajectory");
    return traj.mean_value.back();
}

double efficiency_of(const Trajectory& traj) {
    const int t = convergence_step(traj);
    return t == 0 ? 1.0 : 1.0 / static_cast<double>(t);
}

namespace {

struct AgentState {
    SolutionEval eval;
    double fit = 0.0;
    bool at_local_opt = false;
    std::uint32_t content_id = 0;
};

// Exact bitwise equality; the content id only short-circuits copies.
// Stored fitness is not a safe filter here because incremental sums can
// drift apart for identical bit strings.
bool equal_content(const AgentState& a, const AgentState& b) {
    return a.content_id == b.content_id || a.eval.same_bits(b.eval);
}

double population_mean(const std::vector<AgentState>& states) {
    double sum = 0.0;
    for (const AgentState& s : states) sum += s.fit;
    return sum / static_cast<double>(states.size());
}

/// Climb within the agent's plan: one flip or all the way to the plan's
/// local optimum. Returns whether the solution changed.
bool climb(SolutionEval& eval, const kernels::FlipPlan& plan,
           const std::vector<std::int32_t>& flip_locus, bool single_flip,
           std::vector<double>& scratch) {
    bool moved = false;
    for (;;) {
        const int row = eval.best_plan_flip(plan, scratch);
        if (row < 0) break;
        eval.apply_flip(flip_locus.empty() ? row : flip_locus[row]);
        moved = true;
        if (single_flip) break;
    }
    return moved;
}

/// Plurality by exact content over an arbitrary peer set, grouped through
/// cheap filters (content id, then a per-round hash, then the bits).
/// Returns the index into `peers` of the winning class representative.
struct PluralityBuckets {
    struct Bucket {
        std::int32_t rep;
        std::int32_t count;
    };
    std::vector<Bucket> buckets;

    int winner(const std::vector<std::int32_t>& peers,
               const std::vector<AgentState>& states,
               const std::vector<std::uint64_t>& hashes, Rng& rng) {
        buckets.clear();
        for (std::int32_t peer : peers) {
            bool placed = false;
            for (Bucket& b : buckets) {
                if (hashes[b.rep] == hashes[peer] &&
                    equal_content(states[b.rep], states[peer])) {
                    ++b.count;
                    placed = true;
                    break;
                }
            }
            if (!placed) buckets.push_back({peer, 1});
        }
        if (buckets.empty()) return -1;
        std::int32_t best = 0;
        for (std::size_t c = 1; c < buckets.size(); ++c)
            if (buckets[c].count > buckets[best].count)
                best = static_cast<std::int32_t>(c);
        int tied = 0;
        for (const Bucket& b : buckets) tied += b.count == buckets[best].count;
        if (tied > 1) {
            int pick = static_cast<int>(uniform_below(rng, tied));
            for (std::size_t c = 0; c < buckets.size(); ++c) {
                if (buckets[c].count == buckets[best].count && pick-- == 0) {
                    best = static_cast<std::int32_t>(c);
                    break;
                }
            }
        }
        return buckets[best].rep;
    }
};

std::uint64_t bits_hash(const std::vector<std::int32_t>& bits) {
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a over the words
    for (std::int32_t b : bits) {
        h ^= static_cast<std::uint32_t>(b);
        h *= 1099511628211ull;
    }
    return h;
}

/// Best+I / Conf+I / Best+LI / Conf+LI: per-agent solutions, a social
/// stage against neighbors, then individual hill climbing. Synchronous
/// mode has every social decision read the previous iteration's
/// population before any state is written; asynchronous mode sweeps
/// agents in id order over the live population.
void run_population(const NkModel& model, const ConcernNetwork& net,
                    const TrialSpec& spec, Rng& dyn, Trajectory& traj) {
    const StrategyKind kind = spec.strategy.kind;
    const bool local = uses_local_learning(kind);
    const bool by_fitness =
        kind == StrategyKind::best_i || kind == StrategyKind::best_li;
    const int m = net.size();
    const int sample_size = spec.strategy.neighbor_sample_size;
    const bool conf_sampled = spec.conformity_sampled;

    std::vector<AgentState> states(m);
    std::uint32_t next_content = 0;
    for (int a = 0; a < m; ++a) {
        states[a].eval = SolutionEval(model, random_solution(model.n(), dyn));
        states[a].fit = states[a].eval.fitness();
        states[a].content_id = next_content++;
    }
    std::vector<LocalFlipPlan> plans;
    if (local) {
        plans.reserve(m);
        for (const Agent& a : net.agents)
            plans.push_back(build_local_plan(model, a.concern));
    }
    const std::vector<std::int32_t> no_map;  // global plan rows are loci

    traj.mean_value.push_back(population_mean(states));

    std::vector<double> scratch, sampled_fit;
    std::vector<std::uint64_t> hashes(m, 0);
    const bool need_hashes = !by_fitness && !conf_sampled &&
                             spec.conformity_mode ==
                                 ConformityMode::plurality;
    if (need_hashes)
        for (int a = 0; a < m; ++a) hashes[a] = bits_hash(states[a].eval.bits());
    PluralityBuckets plurality;

    // Social decision for one agent against the given population view.
    auto draw_sample = [&](int a) {
        return spec.sample_with_replacement
                   ? sample_neighbors_with_replacement(net, a, sample_size,
                                                       dyn)
                   : sample_neighbors(net, a, sample_size, dyn);
    };

    const bool conf_mix =
        !by_fitness && (spec.conformity_mode != ConformityMode::plurality ||
                        (spec.conformity_concern_scoped && local));
    std::vector<std::int32_t> mix_bits(model.n());
    std::vector<std::int32_t> mix_ones(model.n());
    // Conformity target for bitwise-capable modes; true when it differs
    // from the agent's own bits (result left in mix_bits). Limited-concern
    // strategies conform only on the bits inside their concern.
    auto compute_mix = [&](int a) -> bool {
        const auto sampled =
            conf_sampled ? draw_sample(a) : net.adj[a];
        if (sampled.empty()) return false;
        const int n = model.n();
        if (spec.conformity_concern_scoped && local) {
            // Limited concern: the agent only sees (and conforms on) the
            // solution bits inside its own concern.
            const auto& own = states[a].eval.bits();
            std::copy(own.begin(), own.end(), mix_bits.begin());
            const auto& concern = plans[a].flip_locus;
            const int count = static_cast<int>(sampled.size());
            bool differs = false;
            if (spec.conformity_mode == ConformityMode::bitwise) {
                for (std::int32_t l : concern) {
                    int ones = 0;
                    for (auto b : sampled) ones += states[b].eval.bits()[l];
                    const int zeros = count - ones;
                    std::int32_t bit;
                    if (ones > zeros)
                        bit = 1;
                    else if (zeros > ones)
                        bit = 0;
                    else
                        bit = uniform_bit(dyn);
                    mix_bits[l] = bit;
                    differs |= bit != own[l];
                }
                return differs;
            }
            // Plurality over concern substrings; ties uniform.
            auto key_of = [&](const std::vector<std::int32_t>& bits) {
                std::uint64_t key = 0;
                for (std::size_t i = 0; i < concern.size(); ++i)
                    key |= static_cast<std::uint64_t>(bits[concern[i]]) << i;
                return key;
            };
            std::uint64_t keys[16];
            const int limit = std::min<int>(count, 16);
            for (int i = 0; i < limit; ++i)
                keys[i] = key_of(states[sampled[i]].eval.bits());
            int reps[16];
            int tally[16];
            int classes = 0;
            for (int i = 0; i < limit; ++i) {
                bool found = false;
                for (int c = 0; c < classes && !found; ++c) {
                    if (keys[reps[c]] == keys[i]) {
                        ++tally[c];
                        found = true;
                    }
                }
                if (!found) {
                    reps[classes] = i;
                    tally[classes] = 1;
                    ++classes;
                }
            }
            int best = 0;
            for (int c = 1; c < classes; ++c)
                if (tally[c] > tally[best]) best = c;
            int tied = 0;
            for (int c = 0; c < classes; ++c)
                tied += tally[c] == tally[best];
            if (tied > 1) {
                int pick = static_cast<int>(uniform_below(dyn, tied));
                for (int c = 0; c < classes; ++c) {
                    if (tally[c] == tally[best] && pick-- == 0) {
                        best = c;
                        break;
                    }
                }
            }
            if (keys[reps[best]] == key_of(own)) return false;
            const auto& src = states[sampled[reps[best]]].eval.bits();
            for (std::int32_t l : concern) {
                mix_bits[l] = src[l];
                differs |= src[l] != own[l];
            }
            return differs;
        }
        if (spec.conformity_mode == ConformityMode::plurality_else_bitwise &&
            sampled.size() <= 8) {
            // A solution sampled at least twice, more often than any
            // other, gets copied outright.
            int reps[8];
            int tally[8];
            int classes = 0;
            for (std::size_t i = 0; i < sampled.size(); ++i) {
                bool found = false;
                for (int c = 0; c < classes && !found; ++c) {
                    if (equal_content(states[sampled[reps[c]]],
                                      states[sampled[i]])) {
                        ++tally[c];
                        found = true;
                    }
                }
                if (!found) {
                    reps[classes] = static_cast<int>(i);
                    tally[classes] = 1;
                    ++classes;
                }
            }
            int best = 0;
            bool unique = true;
            for (int c = 1; c < classes; ++c) {
                if (tally[c] > tally[best]) {
                    best = c;
                    unique = true;
                } else if (tally[c] == tally[best]) {
                    unique = false;
                }
            }
            if (tally[best] >= 2 && unique) {
                const AgentState& src = states[sampled[reps[best]]];
                if (equal_content(src, states[a])) return false;
                const auto& bits = src.eval.bits();
                std::copy(bits.begin(), bits.end(), mix_bits.begin());
                return true;
            }
        }
        std::fill(mix_ones.begin(), mix_ones.end(), 0);
        for (auto b : sampled) {
            const auto& bits = states[b].eval.bits();
            for (int l = 0; l < n; ++l) mix_ones[l] += bits[l];
        }
        int count = static_cast<int>(sampled.size());
        bool differs = false;
        const auto& own = states[a].eval.bits();
        if (spec.conformity_include_self) {
            for (int l = 0; l < n; ++l) mix_ones[l] += own[l];
            ++count;
        }
        for (int l = 0; l < n; ++l) {
            const int ones = mix_ones[l];
            const int zeros = count - ones;
            std::int32_t bit;
            if (ones > zeros)
                bit = 1;
            else if (zeros > ones)
                bit = 0;
            else
                bit = spec.conformity_include_self ? own[l]
                                                   : uniform_bit(dyn);
            mix_bits[l] = bit;
            differs |= bit != own[l];
        }
        return differs;
    };

    // Replace an agent's solution with mix_bits, incrementally when the
    // strings are close.
    auto apply_mix = [&](int a) {
        AgentState& st = states[a];
        const auto& own = st.eval.bits();
        const int n = model.n();
        int changed = 0;
        for (int l = 0; l < n; ++l) changed += mix_bits[l] != own[l];
        if (changed <= 2 * (model.k() + 1)) {
            for (int l = 0; l < n; ++l)
                if (mix_bits[l] != st.eval.bits()[l]) st.eval.apply_flip(l);
        } else {
            st.eval.reset(Solution{mix_bits});
        }
        st.fit = st.eval.fitness();
        st.content_id = next_content++;
        st.at_local_opt = false;
        if (need_hashes) hashes[a] = bits_hash(st.eval.bits());
    };

    auto social_source = [&](int a) -> std::int32_t {
        if (by_fitness) {
            const auto sampled = draw_sample(a);
            if (sampled.empty()) return -1;
            sampled_fit.clear();
            for (auto b : sampled) sampled_fit.push_back(states[b].fit);
            const int pick =
                choose_best_neighbor(sampled_fit, states[a].fit, dyn);
            return pick >= 0 ? sampled[pick] : -1;
        }
        std::int32_t rep = -1;
        if (conf_sampled) {
            const auto sampled = draw_sample(a);
            if (sampled.empty()) return -1;
            const int pick = choose_plurality(
                static_cast<int>(sampled.size()),
                [&](int i, int j) {
                    return equal_content(states[sampled[i]],
                                         states[sampled[j]]);
                },
                dyn);
            rep = pick >= 0 ? sampled[pick] : -1;
        } else {
            if (net.adj[a].empty()) return -1;
            rep = plurality.winner(net.adj[a], states, hashes, dyn);
        }
        if (rep >= 0 && equal_content(states[rep], states[a])) return -1;
        return rep;
    };

    auto adopt_from = [&](int a, const SolutionEval& src_eval, double src_fit,
                          std::uint32_t src_id, bool src_opt) {
        AgentState& st = states[a];
        st.eval = src_eval;
        st.fit = src_fit;
        st.content_id = src_id;
        // A copied solution is at the adopter's local optimum only in the
        // global variants; concerns differ in the local ones.
        st.at_local_opt = local ? false : src_opt;
        if (need_hashes) hashes[a] = bits_hash(st.eval.bits());
    };

    auto individual_stage = [&](int a) -> bool {
        AgentState& st = states[a];
        if (st.at_local_opt) return false;
        const bool moved =
            local ? climb(st.eval, plans[a].plan(), plans[a].flip_locus,
                          spec.local_single_flip, scratch)
                  : climb(st.eval, model.flip_plan(), no_map, true, scratch);
        if (!moved) {
            st.at_local_opt = true;
            return false;
        }
        // A completed climb ends at the concern-local optimum.
        if (local && !spec.local_single_flip) st.at_local_opt = true;
        st.fit = st.eval.fitness();
        st.content_id = next_content++;
        if (need_hashes) hashes[a] = bits_hash(st.eval.bits());
        return true;
    };

    // Snapshot pool preserving adoption sources' pre-iteration states
    // (synchronous mode only).
    std::vector<std::vector<std::int32_t>> mix_store(conf_mix ? m : 0);
    std::vector<std::int32_t> adopt_src(m);
    std::vector<SolutionEval> snap_pool;
    std::vector<double> snap_fit;
    std::vector<std::uint32_t> snap_id;
    std::vector<char> snap_opt;
    std::vector<std::int32_t> snap_slot(m);
    std::vector<std::int32_t> snap_stamp(m, -1);

    for (int t = 1; t <= spec.iterations; ++t) {
        bool changed = false;

        if (spec.individual_first)
            for (int a = 0; a < m; ++a) changed |= individual_stage(a);

        if (spec.synchronous && conf_mix) {
            // Decision pass computes every mix from the unmodified
            // population, storing only real changes.
            for (int a = 0; a < m; ++a) {
                mix_store[a].clear();
                if (compute_mix(a))
                    mix_store[a].assign(mix_bits.begin(), mix_bits.end());
            }
            for (int a = 0; a < m; ++a) {
                const bool mixed = !mix_store[a].empty();
                if (mixed) {
                    mix_bits.assign(mix_store[a].begin(), mix_store[a].end());
                    apply_mix(a);
                    changed = true;
                }
                if (spec.individual_first || (spec.copy_else_climb && mixed))
                    continue;
                changed |= individual_stage(a);
            }
        } else if (!spec.synchronous && conf_mix) {
            for (int a = 0; a < m; ++a) {
                const bool mixed = compute_mix(a);
                if (mixed) {
                    apply_mix(a);
                    changed = true;
                }
                if (spec.individual_first || (spec.copy_else_climb && mixed))
                    continue;
                changed |= individual_stage(a);
            }
        } else if (spec.synchronous) {
            // Decision pass (read-only), then snapshot sources, then apply.
            for (int a = 0; a < m; ++a) adopt_src[a] = social_source(a);
            int pool_used = 0;
            for (int a = 0; a < m; ++a) {
                const std::int32_t s = adopt_src[a];
                if (s < 0 || snap_stamp[s] == t) continue;
                snap_stamp[s] = t;
                snap_slot[s] = pool_used;
                if (pool_used == static_cast<int>(snap_pool.size())) {
                    snap_pool.emplace_back();
                    snap_fit.push_back(0.0);
                    snap_id.push_back(0);
                    snap_opt.push_back(0);
                }
                snap_pool[pool_used] = states[s].eval;
                snap_fit[pool_used] = states[s].fit;
                snap_id[pool_used] = states[s].content_id;
                snap_opt[pool_used] = states[s].at_local_opt;
                ++pool_used;
            }
            for (int a = 0; a < m; ++a) {
                const std::int32_t s = adopt_src[a];
                if (s < 0) continue;
                const std::int32_t slot = snap_slot[s];
                adopt_from(a, snap_pool[slot], snap_fit[slot], snap_id[slot],
                           snap_opt[slot] != 0);
                changed = true;
            }
            for (int a = 0; a < m; ++a) {
                if (spec.individual_first ||
                    (spec.copy_else_climb && adopt_src[a] >= 0))
                    continue;
                changed |= individual_stage(a);
            }
        } else {
            // Asynchronous sweep: adopt from the live population, then
            // climb, agent by agent.
            for (int a = 0; a < m; ++a) {
                const std::int32_t s = social_source(a);
                if (s >= 0) {
                    adopt_from(a, states[s].eval, states[s].fit,
                               states[s].content_id, states[s].at_local_opt);
                    changed = true;
                    if (spec.copy_else_climb) continue;
                }
                if (!spec.individual_first) changed |= individual_stage(a);
            }
        }

        traj.mean_value.push_back(population_mean(states));

        if (changed) continue;

        // Quiescent iteration: exit early only once no future sample can
        // alter any agent (exact for best-neighbor, sufficient for
        // conformity).
        bool fixed = true;
        for (int a = 0; a < m && fixed; ++a) {
            if (!states[a].at_local_opt) fixed = false;
            for (std::int32_t b : net.adj[a]) {
                if (by_fitness ? states[b].fit > states[a].fit
                               : !equal_content(states[a], states[b])) {
                    fixed = false;
                    break;
                }
            }
        }
        if (fixed) {
            traj.mean_value.resize(spec.iterations + 1,
                                   traj.mean_value.back());
            break;
        }
    }
}

/// LMaj+LI: one shared solution; each round agents vote per locus on
/// their concern-local preferred flips.
void run_lmaj(const NkModel& model, const ConcernNetwork& net,
              const TrialSpec& spec, Rng& dyn, Trajectory& traj) {
    SolutionEval shared(model, random_solution(model.n(), dyn));
    traj.mean_value.push_back(shared.fitness());
    std::vector<LocalFlipPlan> plans;
    plans.reserve(net.size());
    for (const Agent& a : net.agents)
        plans.push_back(build_local_plan(model, a.concern));
    const LmajRules rules{spec.lmaj_vote_mode, spec.local_single_flip,
                          spec.lmaj_tie_coin};
    LmajWorkspace ws;
    for (int t = 1; t <= spec.iterations; ++t) {
        const int flips =
            lmaj_round(shared, plans, net.locus_agents, rules, dyn, ws);
        traj.mean_value.push_back(shared.fitness());
        if (flips == 0 && !spec.lmaj_tie_coin) {
            // Deterministic rounds: no flips now means none ever after.
            traj.mean_value.resize(spec.iterations + 1,
                                   traj.mean_value.back());
            break;
        }
    }
}

}  // namespace

TrialResult run_trial(const TrialSpec& spec) {
    if (spec.iterations < 1)
        throw std::invalid_argument("iterations must be >= 1");
    if (spec.strategy.neighbor_sample_size < 1)
        throw std::invalid_argument("neighbor sample size must be >= 1");
    if (!(spec.rewire_p >= 0.0 && spec.rewire_p <= 1.0))
        throw std::invalid_argument("rewire_p outside [0,1]");

    const std::uint64_t world = spec.world_seed.value_or(spec.seed);
    const NkModel model =
        NkModel::generate(spec.n, spec.k, derive_seed(world, 0x4d));
    Rng net_rng(derive_seed(world, 0x4e));
    std::vector<Agent> agents = build_concerns(model);
    rewire(agents, spec.n, spec.rewire_p, net_rng, spec.rewire_home_exempt);
    const ConcernNetwork net =
        build_graph(std::move(agents), spec.n, spec.rewire_p);

    TrialResult result;
    result.network.mean_degree = net.mean_degree();
    const auto paths = graph::path_length_exact_dense(net.adj);
    result.network.path_length = paths.mean_path.value_or(0.0);
    result.network.connected_fraction = paths.connected_fraction;

    Rng dyn(derive_seed(spec.seed, 0x44));
    result.trajectory.mean_value.reserve(spec.iterations + 1);
    if (spec.strategy.kind == StrategyKind::lmaj_li)
        run_lmaj(model, net, spec, dyn, result.trajectory);
    else
        run_population(model, net, spec, dyn, result.trajectory);

    result.converged_at = convergence_step(result.trajectory);
    result.performance = performance_of(result.trajectory);
    result.efficiency = efficiency_of(result.trajectory);
    return result;
}

std::string trial_csv_header() {
    return "strategy,n,k,rewire_p,seed,mean_degree,path_length,performance,"
           "efficiency,converged_at";
}

std::string trial_csv_row(const TrialSpec& spec, const TrialResult& r) {
    std::string row;
    row += strategy_name(spec.strategy.kind);
    row += ',';
    row += std::to_string(spec.n);
    row += ',';
    row += std::to_string(spec.k);
    row += ',';
    row += fmt_double(spec.rewire_p);
    row += ',';
    row += std::to_string(spec.seed);
    row += ',';
    row += fmt_double(r.network.mean_degree);
    row += ',';
    row += fmt_double(r.network.path_length);
    row += ',';
    row += fmt_double(r.performance);
    row += ',';
    row += fmt_double(r.efficiency);
    row += ',';
    row += std::to_string(r.converged_at);
    return row;
}

void write_trajectory_csv(const Trajectory& traj, std::ostream& out) {
    out << "iteration,mean_value\n";
    for (std::size_t t = 0; t < traj.mean_value.size(); ++t)
        out << t << ',' << fmt_double(traj.mean_value[t]) << '\n';
}

}  // namespace nkc
