#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nkc/landscape.hpp"

namespace nkc {

/// Flip plan restricted to an agent's concern: candidate flips are the
/// concern loci and only locus values inside the concern are scored,
/// which makes a best_plan_flip() scan equivalent to maximizing
/// local_score over single-bit flips.
struct LocalFlipPlan {
    std::vector<std::int32_t> flip_locus;  // row -> locus being flipped
    std::vector<std::int32_t> row, locus, mask, ent_flip;

    kernels::FlipPlan plan() const {
        return {static_cast<std::int32_t>(flip_locus.size()), row.data(),
                locus.data(), mask.data(), ent_flip.data()};
    }
};

LocalFlipPlan build_local_plan(const NkModel& model,
                               std::span<const std::int32_t> concern);

/// Incrementally maintained evaluation state for one solution: cached
/// table indices, locus values and fitness sum. A single bit flip costs
/// one flip-plan row instead of a full re-evaluation.
class SolutionEval {
public:
    SolutionEval() = default;
    SolutionEval(const NkModel& model, const Solution& s);

    void reset(const Solution& s);

    const NkModel& model() const { return *model_; }
    int n() const { return model_->n(); }
    double fitness() const { return sum_ / model_->n(); }
    const std::vector<std::int32_t>& bits() const { return bits_; }
    Solution solution() const { return Solution{bits_}; }

    std::span<const double> locus_values() const { return values_; }

    void apply_flip(int locus);

    /// Strictly improving single-bit flip with the largest fitness gain
    /// over all n candidates (lowest locus on ties), or -1 if none.
    int best_global_flip(std::vector<double>& scratch) const;

    /// Same over an arbitrary plan; returns the winning plan row, or -1.
    int best_plan_flip(const kernels::FlipPlan& plan,
                       std::vector<double>& scratch) const;

    /// Score change of one plan row's flip (sum of its entries).
    double plan_row_delta(const kernels::FlipPlan& plan, int row) const;

    /// Recompute everything from the bits (drift control / testing).
    void rebuild();

    bool same_bits(const SolutionEval& other) const {
        return bits_ == other.bits_;
    }

private:
    const NkModel* model_ = nullptr;
    std::vector<std::int32_t> bits_;
    std::vector<std::int32_t> idx_;
    std::vector<double> values_;
    double sum_ = 0.0;
};

}  // namespace nkc
