#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nkc/concern.hpp"
#include "nkc/eval.hpp"
#include "nkc/landscape.hpp"
#include "nkc/rng.hpp"

namespace nkc {

/// The five learning strategies: a social stage (best-neighbor,
/// conformity, or local-majority voting) followed by an individual
/// hill-climbing stage (global or concern-local).
enum class StrategyKind { best_i, conf_i, best_li, conf_li, lmaj_li };

const char* strategy_name(StrategyKind kind);  // "Best+I", "Conf+LI", ...
std::optional<StrategyKind> parse_strategy(const std::string& name);
std::span<const StrategyKind> all_strategies();

struct StrategyConfig {
    StrategyKind kind = StrategyKind::lmaj_li;
    int neighbor_sample_size = 3;
};

inline bool uses_local_learning(StrategyKind k) {
    return k != StrategyKind::best_i && k != StrategyKind::conf_i;
}

/// What "adopt the most common solution" means for the conformity stage.
enum class ConformityMode {
    /// Copy the most common whole solution in the sample; ties (including
    /// an all-distinct sample) break uniformly at random.
    plurality,
    /// Adopt the coordinatewise modal solution of the sample.
    bitwise,
    /// Copy a strict plurality solution when one exists, otherwise adopt
    /// the coordinatewise mode.
    plurality_else_bitwise,
};

/// One global hill-climbing step: apply the single-bit flip with the
/// largest strict fitness gain, if any.
Solution individual_step_global(const NkModel& model, const Solution& s);

/// Local variant: candidate flips restricted to `concern` (sorted),
/// scored by local_score over the concern.
Solution individual_step_local(const NkModel& model, const Solution& s,
                               std::span<const std::int32_t> concern);

/// Up to `sample_size` distinct neighbors of `agent`, or the whole
/// neighborhood when it is smaller (then no randomness is consumed).
std::vector<std::int32_t> sample_neighbors(const ConcernNetwork& net,
                                           int agent, int sample_size,
                                           Rng& rng);

/// `sample_size` independent draws from the neighborhood (duplicates
/// possible); empty for isolated agents.
std::vector<std::int32_t> sample_neighbors_with_replacement(
    const ConcernNetwork& net, int agent, int sample_size, Rng& rng);

/// Best-neighbor adoption rule: index into `sampled_fitness` of a
/// strictly-better neighbor with maximal fitness (uniform among ties),
/// or -1 to keep the own solution.
int choose_best_neighbor(std::span<const double> sampled_fitness,
                         double own_fitness, Rng& rng);

/// Conformity rule: index of the plurality solution among `count`
/// sampled items, where same(i, j) tests bitwise solution equality.
/// Ties between equally common solutions break uniformly at random.
/// Never consults fitness. Returns -1 for an empty sample.
template <class SameFn>
int choose_plurality(int count, SameFn&& same, Rng& rng) {
    if (count <= 0) return -1;
    // Tiny samples: representative scan is O(count^2).
    int reps[16];
    int tally[16];
    int classes = 0;
    for (int i = 0; i < count; ++i) {
        bool found = false;
        for (int c = 0; c < classes && !found; ++c) {
            if (same(reps[c], i)) {
                ++tally[c];
                found = true;
            }
        }
        if (!found && classes < 16) {
            reps[classes] = i;
            tally[classes] = 1;
            ++classes;
        }
    }
    int best = 0;
    for (int c = 1; c < classes; ++c)
        if (tally[c] > tally[best]) best = c;
    int tied = 0;
    for (int c = 0; c < classes; ++c) tied += tally[c] == tally[best];
    if (tied == 1) return reps[best];
    const int pick = static_cast<int>(uniform_below(rng, tied));
    for (int c = 0, seen = 0; c < classes; ++c) {
        if (tally[c] == tally[best] && seen++ == pick) return reps[c];
    }
    return reps[best];  // unreachable
}

/// How local-majority ballots are formed.
enum class LmajVoteMode {
    /// Preferences are fixed at the start of the round; all loci are then
    /// settled simultaneously from those ballots.
    round_preferences,
    /// Loci are settled one at a time in index order; each concerned
    /// agent re-climbs its concern against the current shared state and
    /// votes the resulting bit.
    refreshed_climb,
    /// As refreshed_climb, but an agent's ballot at a locus is just the
    /// improvement direction of flipping that locus for its local score.
    refreshed_gain,
};

/// Local-majority voting rules. Defaults reproduce the published table.
struct LmajRules {
    LmajVoteMode mode = LmajVoteMode::refreshed_climb;
    /// round_preferences only: one hill-climbing step per preference
    /// (true) or a full climb to the concern-local optimum (false).
    bool single_flip_prefs = true;
    /// Exact vote ties toss a coin instead of keeping the incumbent bit.
    bool tie_coin = false;
};

/// Scratch buffers reused across local-majority rounds.
struct LmajWorkspace {
    std::vector<double> deltas;
    std::vector<std::int32_t> votes_one;   // per locus
    std::vector<std::int32_t> votes_zero;  // per locus
    SolutionEval preference;
};

/// One local-majority round over the shared solution: agents form
/// preferred solutions by concern-local hill climbing from the shared
/// state and every locus takes the majority bit over the ballots cast on
/// it (see LmajVoteMode). Loci with no concerned agents, and exact ties
/// under the incumbent rule, keep their bit. Applies the winning flips
/// to `shared` and returns how many loci changed.
int lmaj_round(SolutionEval& shared, std::span<const LocalFlipPlan> plans,
               const std::vector<std::vector<std::int32_t>>& locus_agents,
               const LmajRules& rules, Rng& rng, LmajWorkspace& ws);

/// Convenience wrapper over lmaj_round for a one-shot call; derives the
/// locus->agents index from the concerns.
Solution local_majority_round(const NkModel& model, const Solution& shared,
                              std::span<const Agent> agents,
                              const LmajRules& rules, Rng& rng);

}  // namespace nkc
