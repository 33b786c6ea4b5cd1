#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "nkc/eval.hpp"
#include "oracles.hpp"

using namespace nkc;

TEST_CASE("incremental flips track full recomputation within 1e-12") {
    Rng rng(314159);
    for (int round = 0; round < 4; ++round) {
        const int n = 8 + static_cast<int>(uniform_below(rng, 57));  // <= 64
        const int k = static_cast<int>(uniform_below(rng, std::min(n, 8)));
        const NkModel m = NkModel::generate(n, k, rng());
        SolutionEval eval(m, random_solution(n, rng));
        for (int flip = 0; flip < 1000; ++flip) {
            eval.apply_flip(static_cast<int>(uniform_below(rng, n)));
            if (flip % 97 == 0) {
                const double full = oracle::fitness(m, eval.solution());
                REQUIRE(std::abs(eval.fitness() - full) <= 1e-12);
            }
        }
        const double full = oracle::fitness(m, eval.solution());
        REQUIRE(std::abs(eval.fitness() - full) <= 1e-12);
    }
}

TEST_CASE("best_global_flip equals exhaustive search") {
    Rng rng(21);
    for (int round = 0; round < 20; ++round) {
        const int n = 4 + static_cast<int>(uniform_below(rng, 20));
        const int k = static_cast<int>(uniform_below(rng, std::min(n, 6)));
        const NkModel m = NkModel::generate(n, k, rng());
        const Solution s = random_solution(n, rng);
        SolutionEval eval(m, s);
        std::vector<double> scratch;
        std::vector<std::int32_t> all;
        for (int i = 0; i < n; ++i) all.push_back(i);
        const int expected = oracle::best_flip(
            s, all, [&](const Solution& t) { return oracle::fitness(m, t); });
        CHECK(eval.best_global_flip(scratch) == expected);
    }
}

TEST_CASE("local plan scans maximize local_score over the concern") {
    Rng rng(22);
    for (int round = 0; round < 20; ++round) {
        const int n = 6 + static_cast<int>(uniform_below(rng, 16));
        const int k = 1 + static_cast<int>(uniform_below(rng, 4));
        if (k >= n) continue;
        const NkModel m = NkModel::generate(n, k, rng());
        // Random sorted concern of size k+1.
        std::vector<std::int32_t> concern;
        while (static_cast<int>(concern.size()) < k + 1) {
            const auto l = static_cast<std::int32_t>(uniform_below(rng, n));
            if (std::find(concern.begin(), concern.end(), l) == concern.end())
                concern.push_back(l);
        }
        std::sort(concern.begin(), concern.end());
        const Solution s = random_solution(n, rng);
        const LocalFlipPlan lp = build_local_plan(m, concern);
        SolutionEval eval(m, s);
        std::vector<double> scratch;
        const int row = eval.best_plan_flip(lp.plan(), scratch);
        const int got = row >= 0 ? lp.flip_locus[row] : -1;
        const int expected = oracle::best_flip(s, concern, [&](const Solution& t) {
            return oracle::local_score(m, t, concern);
        });
        CHECK(got == expected);
    }
}

TEST_CASE("reset and rebuild reproduce a fresh evaluation") {
    const NkModel m = NkModel::generate(40, 5, 99);
    Rng rng(40);
    const Solution a = random_solution(40, rng);
    const Solution b = random_solution(40, rng);
    SolutionEval eval(m, a);
    eval.apply_flip(3);
    eval.reset(b);
    CHECK(eval.solution() == b);
    CHECK(eval.fitness() == SolutionEval(m, b).fitness());
    eval.rebuild();
    CHECK(eval.fitness() == SolutionEval(m, b).fitness());
}
