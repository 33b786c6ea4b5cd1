#include "nkc/strategies.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace nkc {

namespace {
constexpr std::array<StrategyKind, 5> kAll = {
    StrategyKind::best_i, StrategyKind::conf_i, StrategyKind::best_li,
    StrategyKind::conf_li, StrategyKind::lmaj_li};
}

const char* strategy_name(StrategyKind kind) {
    switch (kind) {
        case StrategyKind::best_i: return "Best+I";
        case StrategyKind::conf_i: return "Conf+I";
        case StrategyKind::best_li: return "Best+LI";
        case StrategyKind::conf_li: return "Conf+LI";
        case StrategyKind::lmaj_li: return "LMaj+LI";
    }
    return "?";
}

std::optional<StrategyKind> parse_strategy(const std::string& name) {
    for (StrategyKind k : kAll)
        if (name == strategy_name(k)) return k;
    return std::nullopt;
}

std::span<const StrategyKind> all_strategies() { return kAll; }

Solution individual_step_global(const NkModel& model, const Solution& s) {
    SolutionEval eval(model, s);
    std::vector<double> scratch;
    const int flip = eval.best_global_flip(scratch);
    if (flip >= 0) eval.apply_flip(flip);
    return eval.solution();
}

Solution individual_step_local(const NkModel& model, const Solution& s,
                               std::span<const std::int32_t> concern) {
    const LocalFlipPlan lp = build_local_plan(model, concern);
    SolutionEval eval(model, s);
    std::vector<double> scratch;
    const int row = eval.best_plan_flip(lp.plan(), scratch);
    if (row >= 0) eval.apply_flip(lp.flip_locus[row]);
    return eval.solution();
}

std::vector<std::int32_t> sample_neighbors_with_replacement(
    const ConcernNetwork& net, int agent, int sample_size, Rng& rng) {
    if (sample_size < 1)
        throw std::invalid_argument("sample size must be >= 1");
    const auto& nbrs = net.adj[agent];
    std::vector<std::int32_t> out;
    if (nbrs.empty()) return out;
    out.reserve(sample_size);
    for (int i = 0; i < sample_size; ++i)
        out.push_back(nbrs[uniform_below(rng, nbrs.size())]);
    return out;
}

std::vector<std::int32_t> sample_neighbors(const ConcernNetwork& net,
                                           int agent, int sample_size,
                                           Rng& rng) {
    if (sample_size < 1)
        throw std::invalid_argument("sample size must be >= 1");
    const auto& nbrs = net.adj[agent];
    const int deg = static_cast<int>(nbrs.size());
    if (deg <= sample_size) return nbrs;
    if (2 * sample_size >= deg) {
        // Dense request: partial Fisher-Yates over a scratch copy.
        std::vector<std::int32_t> pool(nbrs);
        for (int i = 0; i < sample_size; ++i) {
            const auto j =
                i + static_cast<int>(uniform_below(rng, deg - i));
            std::swap(pool[i], pool[j]);
        }
        pool.resize(sample_size);
        return pool;
    }
    // Typical case (3 of ~100): rejection on positions.
    std::vector<std::uint32_t> picked;
    picked.reserve(sample_size);
    std::vector<std::int32_t> out;
    out.reserve(sample_size);
    while (static_cast<int>(out.size()) < sample_size) {
        const auto at = static_cast<std::uint32_t>(uniform_below(rng, deg));
        if (std::find(picked.begin(), picked.end(), at) != picked.end())
            continue;
        picked.push_back(at);
        out.push_back(nbrs[at]);
    }
    return out;
}

int choose_best_neighbor(std::span<const double> sampled_fitness,
                         double own_fitness, Rng& rng) {
    if (sampled_fitness.empty()) return -1;
    double best = own_fitness;
    for (double f : sampled_fitness) best = std::max(best, f);
    if (!(best > own_fitness)) return -1;
    int tied = 0;
    for (double f : sampled_fitness) tied += f == best;
    int pick = tied > 1 ? static_cast<int>(uniform_below(rng, tied)) : 0;
    for (std::size_t i = 0; i < sampled_fitness.size(); ++i) {
        if (sampled_fitness[i] == best && pick-- == 0)
            return static_cast<int>(i);
    }
    return -1;  // unreachable
}

namespace {

/// Majority decision for one locus; returns the winning bit.
int settle(int incumbent, int ones, int zeros, bool tie_coin, Rng& rng) {
    if (ones > zeros) return 1;
    if (zeros > ones) return 0;
    return tie_coin ? uniform_bit(rng) : incumbent;
}

int round_simultaneous(SolutionEval& shared,
                       std::span<const LocalFlipPlan> plans,
                       const LmajRules& rules, Rng& rng, LmajWorkspace& ws) {
    const int n = shared.n();
    ws.votes_one.assign(n, 0);
    ws.votes_zero.assign(n, 0);
    const auto& bits = shared.bits();
    for (const LocalFlipPlan& lp : plans) {
        if (rules.single_flip_prefs) {
            const int row = shared.best_plan_flip(lp.plan(), ws.deltas);
            for (std::size_t f = 0; f < lp.flip_locus.size(); ++f) {
                const std::int32_t l = lp.flip_locus[f];
                const std::int32_t pref =
                    static_cast<int>(f) == row ? bits[l] ^ 1 : bits[l];
                ++(pref ? ws.votes_one[l] : ws.votes_zero[l]);
            }
        } else {
            ws.preference = shared;
            const auto plan = lp.plan();
            for (;;) {
                const int row = ws.preference.best_plan_flip(plan, ws.deltas);
                if (row < 0) break;
                ws.preference.apply_flip(lp.flip_locus[row]);
            }
            const auto& pref = ws.preference.bits();
            for (std::int32_t l : lp.flip_locus)
                ++(pref[l] ? ws.votes_one[l] : ws.votes_zero[l]);
        }
    }
    int flips = 0;
    for (int l = 0; l < n; ++l) {
        if (ws.votes_one[l] + ws.votes_zero[l] == 0) continue;
        if (settle(bits[l], ws.votes_one[l], ws.votes_zero[l], rules.tie_coin,
                   rng) != bits[l]) {
            shared.apply_flip(l);
            ++flips;
        }
    }
    return flips;
}

int round_sequential(SolutionEval& shared,
                     std::span<const LocalFlipPlan> plans,
                     const std::vector<std::vector<std::int32_t>>& locus_agents,
                     const LmajRules& rules, Rng& rng, LmajWorkspace& ws) {
    const int n = shared.n();
    const auto& bits = shared.bits();
    int flips = 0;
    for (std::int32_t l = 0; l < n; ++l) {
        const auto& voters = locus_agents[l];
        if (voters.empty()) continue;
        int ones = 0, zeros = 0;
        for (std::int32_t a : voters) {
            const LocalFlipPlan& lp = plans[a];
            std::int32_t ballot;
            if (rules.mode == LmajVoteMode::refreshed_gain) {
                const auto at = std::lower_bound(lp.flip_locus.begin(),
                                                 lp.flip_locus.end(), l);
                const int row = static_cast<int>(at - lp.flip_locus.begin());
                ballot = shared.plan_row_delta(lp.plan(), row) > 0.0
                             ? bits[l] ^ 1
                             : bits[l];
            } else {
                ws.preference = shared;
                const auto plan = lp.plan();
                for (;;) {
                    const int row =
                        ws.preference.best_plan_flip(plan, ws.deltas);
                    if (row < 0) break;
                    ws.preference.apply_flip(lp.flip_locus[row]);
                }
                ballot = ws.preference.bits()[l];
            }
            ++(ballot ? ones : zeros);
        }
        if (settle(bits[l], ones, zeros, rules.tie_coin, rng) != bits[l]) {
            shared.apply_flip(l);
            ++flips;
        }
    }
    return flips;
}

}  // namespace

int lmaj_round(SolutionEval& shared, std::span<const LocalFlipPlan> plans,
               const std::vector<std::vector<std::int32_t>>& locus_agents,
               const LmajRules& rules, Rng& rng, LmajWorkspace& ws) {
    if (rules.mode == LmajVoteMode::round_preferences)
        return round_simultaneous(shared, plans, rules, rng, ws);
    return round_sequential(shared, plans, locus_agents, rules, rng, ws);
}

Solution local_majority_round(const NkModel& model, const Solution& shared,
                              std::span<const Agent> agents,
                              const LmajRules& rules, Rng& rng) {
    std::vector<LocalFlipPlan> plans;
    plans.reserve(agents.size());
    std::vector<std::vector<std::int32_t>> locus_agents(model.n());
    for (std::size_t i = 0; i < agents.size(); ++i) {
        plans.push_back(build_local_plan(model, agents[i].concern));
        for (std::int32_t l : agents[i].concern)
            locus_agents[l].push_back(static_cast<std::int32_t>(i));
    }
    SolutionEval eval(model, shared);
    LmajWorkspace ws;
    lmaj_round(eval, plans, locus_agents, rules, rng, ws);
    return eval.solution();
}

}  // namespace nkc
