#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nkc/strategies.hpp"

namespace nkc {

/// Default for whether the home locus is exempt from concern rewiring.
/// Home rewiring is what couples mean degree to the rewiring probability,
/// which the degree regressions rely on; the flag stays configurable.
inline constexpr bool kRewireHomeExemptDefault = false;

struct TrialSpec {
    int n = 250;
    int k = 7;
    double rewire_p = 0.0;
    StrategyConfig strategy{};
    int iterations = 300;
    std::uint64_t seed = 0;
    bool rewire_home_exempt = kRewireHomeExemptDefault;
    bool lmaj_tie_coin = false;
    /// Semantics toggles; defaults reproduce the published table.
    /// Social decisions read the previous iteration's population when true
    /// (synchronous); otherwise agents update in id order within a round.
    bool synchronous = true;
    /// Local-learning individual stage per iteration: one flip (true) or a
    /// climb to the concern-local optimum (false).
    bool local_single_flip = false;
    /// Conformity counts the sample (true) or the whole neighborhood.
    bool conformity_sampled = true;
    /// How conformity interprets "the most common solution".
    ConformityMode conformity_mode = ConformityMode::bitwise;
    /// Conformity sees only the bits inside the agent's concern.
    bool conformity_concern_scoped = false;
    /// Bitwise conformity counts the agent's own solution as one ballot
    /// (ties then keep the own bit).
    bool conformity_include_self = false;
    /// Neighbor samples draw with replacement.
    bool sample_with_replacement = false;
    /// An agent that adopts a neighbor's solution skips its climbing step
    /// that round (individual learning as the fallback, true) or always
    /// climbs after the social stage (false).
    bool copy_else_climb = false;
    /// Run the individual stage before the social stage each round.
    bool individual_first = false;
    /// How local-majority ballots are formed (see LmajVoteMode).
    LmajVoteMode lmaj_vote_mode = LmajVoteMode::refreshed_climb;
    /// When set, the NK model and network derive from this stream instead
    /// of `seed`, so several strategies can share one world (paired mode).
    std::optional<std::uint64_t> world_seed;
};

/// Population mean solution value per iteration; entry 0 is the initial
/// state, so a trial of T iterations yields T+1 entries.
struct Trajectory {
    std::vector<double> mean_value;
};

/// Smallest t with value[t] >= 0.99 * max(value); always exists.
int convergence_step(const Trajectory& traj);

/// Final-iteration mean value.
double performance_of(const Trajectory& traj);

/// 1 / convergence_step, capped at 1.0 for instant convergence.
double efficiency_of(const Trajectory& traj);

struct NetworkStats {
    double mean_degree = 0.0;
    double path_length = 0.0;
    double connected_fraction = 0.0;
};

struct TrialResult {
    Trajectory trajectory;
    double performance = 0.0;
    double efficiency = 0.0;
    int converged_at = 0;
    NetworkStats network;
};

/// Run one seeded trial: fresh NK model, concern network, then the
/// configured strategy for `iterations` synchronous rounds. Bit-identical
/// across runs for the same spec.
TrialResult run_trial(const TrialSpec& spec);

/// CSV row format shared by the CLI and the sweep harness.
std::string trial_csv_header();
std::string trial_csv_row(const TrialSpec& spec, const TrialResult& result);

/// "iteration,mean_value" dump of one trajectory.
void write_trajectory_csv(const Trajectory& traj, std::ostream& out);

}  // namespace nkc
