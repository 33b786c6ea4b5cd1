#include "nkc/eval.hpp"

#include <algorithm>
#include <stdexcept>

namespace nkc {

LocalFlipPlan build_local_plan(const NkModel& model,
                               std::span<const std::int32_t> concern) {
    if (concern.empty())
        throw std::invalid_argument("local plan needs a non-empty concern");
    LocalFlipPlan lp;
    lp.flip_locus.assign(concern.begin(), concern.end());
    const auto& gp = model.flip_plan();
    lp.row.push_back(0);
    for (std::size_t f = 0; f < lp.flip_locus.size(); ++f) {
        const std::int32_t j = lp.flip_locus[f];
        if (j < 0 || j >= model.n())
            throw std::invalid_argument("concern locus out of range");
        for (std::int32_t e = gp.row[j]; e < gp.row[j + 1]; ++e) {
            if (std::binary_search(concern.begin(), concern.end(),
                                   gp.locus[e])) {
                lp.locus.push_back(gp.locus[e]);
                lp.mask.push_back(gp.mask[e]);
                lp.ent_flip.push_back(static_cast<std::int32_t>(f));
            }
        }
        lp.row.push_back(static_cast<std::int32_t>(lp.locus.size()));
    }
    return lp;
}

SolutionEval::SolutionEval(const NkModel& model, const Solution& s)
    : model_(&model) {
    reset(s);
}

void SolutionEval::reset(const Solution& s) {
    if (s.size() != model_->n())
        throw std::invalid_argument("solution length != n");
    bits_ = s.bits;
    rebuild();
}

void SolutionEval::rebuild() {
    const auto& ops = kernels::active();
    const int n = model_->n();
    idx_.resize(n);
    values_.resize(n);
    ops.pack_indices(model_->view(), bits_.data(), idx_.data());
    ops.gather_values(model_->view(), idx_.data(), values_.data());
    sum_ = ops.striped_sum(values_.data(), n);
}

void SolutionEval::apply_flip(int locus) {
    const auto& plan = model_->flip_plan();
    const auto& view = model_->view();
    for (std::int32_t e = plan.row[locus]; e < plan.row[locus + 1]; ++e) {
        const std::int32_t i = plan.locus[e];
        idx_[i] ^= plan.mask[e];
        const double next =
            view.tables[(static_cast<std::size_t>(i) << view.deps) + idx_[i]];
        sum_ += next - values_[i];
        values_[i] = next;
    }
    bits_[locus] ^= 1;
}

int SolutionEval::best_plan_flip(const kernels::FlipPlan& plan,
                                 std::vector<double>& scratch) const {
    scratch.resize(plan.flips);
    kernels::active().flip_deltas(model_->view(), plan, idx_.data(),
                                  values_.data(), scratch.data());
    int best = -1;
    double best_delta = 0.0;
    for (std::int32_t f = 0; f < plan.flips; ++f) {
        if (scratch[f] > best_delta) {
            best_delta = scratch[f];
            best = f;
        }
    }
    return best;
}

int SolutionEval::best_global_flip(std::vector<double>& scratch) const {
    return best_plan_flip(model_->flip_plan(), scratch);
}

double SolutionEval::plan_row_delta(const kernels::FlipPlan& plan,
                                    int row) const {
    const auto& view = model_->view();
    double acc = 0.0;
    for (std::int32_t e = plan.row[row]; e < plan.row[row + 1]; ++e) {
        const std::int32_t i = plan.locus[e];
        const double next =
            view.tables[(static_cast<std::size_t>(i) << view.deps) +
                        (idx_[i] ^ plan.mask[e])];
        acc += next - values_[i];
    }
    return acc;
}

}  // namespace nkc
