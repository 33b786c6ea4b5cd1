#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "nkc/kernels/kernels.hpp"
#include "nkc/rng.hpp"

namespace nkc {

/// A candidate solution: one bit per locus, stored as 0/1 words so the
/// kernels can gather them directly.
struct Solution {
    std::vector<std::int32_t> bits;

    Solution() = default;
    explicit Solution(std::vector<std::int32_t> b) : bits(std::move(b)) {}

    int size() const { return static_cast<int>(bits.size()); }
    bool operator==(const Solution&) const = default;
};

/// Uniform random bit string of length n.
Solution random_solution(int n, Rng& rng);

/// Parse a string like "0101" (for tests and the CLI).
Solution solution_from_string(const std::string& s);

/// An NK objective function: n loci, each with k neighbor loci and a
/// payoff table of 2^(k+1) values; the objective is the mean locus payoff.
/// Immutable after generation and safe to share across threads.
class NkModel {
public:
    /// Draws neighbor lists (uniform, without replacement, never the locus
    /// itself) and payoff tables (independent uniform [0,1]) from the seed.
    /// Rejects n < 1, k < 0, k >= n, and tables too large to index.
    static NkModel generate(int n, int k, std::uint64_t seed);

    int n() const { return n_; }
    int k() const { return k_; }
    std::uint64_t seed() const { return seed_; }

    std::span<const std::int32_t> neighbors(int locus) const {
        return {neighbors_.data() + static_cast<std::size_t>(locus) * k_,
                static_cast<std::size_t>(k_)};
    }
    std::span<const double> table(int locus) const {
        return {tables_.data() + (static_cast<std::size_t>(locus) << (k_ + 1)),
                std::size_t{1} << (k_ + 1)};
    }

    /// Payoff of one locus: table lookup on (own bit, neighbor bits).
    double locus_value(const Solution& s, int locus) const;

    /// Mean locus payoff, in [0,1]. Summed in the canonical striped order.
    double fitness(const Solution& s) const;

    /// Mean locus payoff over a subset of loci (order given by `loci`).
    double local_score(const Solution& s,
                       std::span<const std::int32_t> loci) const;

    /// Kernel-facing views.
    const kernels::ModelView& view() const { return view_; }
    /// All-loci flip plan: row j lists the loci whose table index changes
    /// when bit j flips, with the XOR masks to apply.
    const kernels::FlipPlan& flip_plan() const { return plan_; }

    /// Exact round-trip text serialization.
    void save(std::ostream& out) const;
    static NkModel load(std::istream& in);

    bool operator==(const NkModel& other) const;

private:
    NkModel() = default;
    void build_derived();
    void check_invariants() const;

    int n_ = 0;
    int k_ = 0;
    std::uint64_t seed_ = 0;
    std::vector<std::int32_t> neighbors_;  // n x k, row-major
    std::vector<double> tables_;           // n << (k+1)

    // Derived, rebuilt on load.
    std::vector<std::int32_t> dep_col_;    // (k+1) x n, column-major
    std::vector<std::int32_t> plan_row_, plan_locus_, plan_mask_, plan_flip_;
    kernels::ModelView view_;
    kernels::FlipPlan plan_;
};

}  // namespace nkc
