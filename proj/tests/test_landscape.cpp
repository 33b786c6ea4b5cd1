#include <doctest.h>

#include <cmath>
#include <sstream>

#include "nkc/landscape.hpp"
#include "oracles.hpp"

using namespace nkc;

TEST_CASE("generate_model validates its arguments") {
    Rng rng(1);
    CHECK_THROWS_AS(NkModel::generate(0, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(NkModel::generate(4, 4, 1), std::invalid_argument);
    CHECK_THROWS_AS(NkModel::generate(4, 7, 1), std::invalid_argument);
    CHECK_THROWS_AS(NkModel::generate(4, -1, 1), std::invalid_argument);
}

TEST_CASE("paper-scale model shape: 250 loci, tables of 2^8") {
    const NkModel m = NkModel::generate(250, 7, 12345);
    CHECK(m.n() == 250);
    CHECK(m.k() == 7);
    for (int i = 0; i < m.n(); ++i) {
        CHECK(m.table(i).size() == 256);
        auto nb = m.neighbors(i);
        CHECK(nb.size() == 7);
        for (int d = 0; d < 7; ++d) {
            CHECK(nb[d] != i);
            for (int e = d + 1; e < 7; ++e) CHECK(nb[d] != nb[e]);
        }
    }
}

TEST_CASE("degenerate model: n=1, k=0") {
    const NkModel m = NkModel::generate(1, 0, 9);
    CHECK(m.table(0).size() == 2);
    Solution zero = solution_from_string("0");
    Solution one = solution_from_string("1");
    CHECK(m.fitness(zero) == m.table(0)[0]);
    CHECK(m.fitness(one) == m.table(0)[1]);
}

TEST_CASE("n=4 k=1 seed=42: fitness of all 16 strings matches brute force") {
    const NkModel m = NkModel::generate(4, 1, 42);
    for (int word = 0; word < 16; ++word) {
        Solution s;
        for (int b = 0; b < 4; ++b) s.bits.push_back((word >> b) & 1);
        const double expected = oracle::fitness(m, s);
        CHECK(m.fitness(s) == doctest::Approx(expected).epsilon(1e-14));
    }
}

TEST_CASE("exhaustive fitness check on random small models") {
    Rng rng(77);
    for (int round = 0; round < 10; ++round) {
        const int n = 2 + static_cast<int>(uniform_below(rng, 9));  // <= 10
        const int k = static_cast<int>(uniform_below(rng, std::min(n, 5)));
        const NkModel m = NkModel::generate(n, k, rng());
        for (int word = 0; word < (1 << n); ++word) {
            Solution s;
            for (int b = 0; b < n; ++b) s.bits.push_back((word >> b) & 1);
            const double f = m.fitness(s);
            CHECK(f >= 0.0);
            CHECK(f <= 1.0);
            CHECK(f == doctest::Approx(oracle::fitness(m, s)).epsilon(1e-13));
        }
    }
}

TEST_CASE("locus_value: k=0 depends only on the own bit") {
    const NkModel m = NkModel::generate(5, 0, 3);
    Solution s = solution_from_string("00000");
    const double v0 = m.locus_value(s, 2);
    s.bits[0] ^= 1;
    s.bits[4] ^= 1;
    CHECK(m.locus_value(s, 2) == v0);
    s.bits[2] ^= 1;
    CHECK(m.locus_value(s, 2) != v0);  // almost surely
}

TEST_CASE("locus_value is local: flips outside {i} + neighbors(i) are inert") {
    const NkModel m = NkModel::generate(12, 3, 2024);
    Rng rng(5);
    Solution s = random_solution(12, rng);
    for (int i = 0; i < m.n(); ++i) {
        const double before = m.locus_value(s, i);
        for (int j = 0; j < m.n(); ++j) {
            if (j == i) continue;
            auto nb = m.neighbors(i);
            if (std::find(nb.begin(), nb.end(), j) != nb.end()) continue;
            Solution t = s;
            t.bits[j] ^= 1;
            CHECK(m.locus_value(t, i) == before);
        }
    }
}

TEST_CASE("mean of locus values equals fitness") {
    const NkModel m = NkModel::generate(33, 4, 8);
    Rng rng(6);
    const Solution s = random_solution(33, rng);
    double sum = 0.0;
    for (int i = 0; i < m.n(); ++i) sum += m.locus_value(s, i);
    CHECK(m.fitness(s) == doctest::Approx(sum / m.n()).epsilon(1e-14));
}

TEST_CASE("locus_value validates inputs") {
    const NkModel m = NkModel::generate(4, 1, 42);
    Solution s = solution_from_string("0000");
    CHECK_THROWS_AS(m.locus_value(s, 4), std::invalid_argument);
    CHECK_THROWS_AS(m.locus_value(s, -1), std::invalid_argument);
    CHECK_THROWS_AS(m.fitness(solution_from_string("000")),
                    std::invalid_argument);
}

TEST_CASE("local_score: whole set equals fitness, singleton equals "
          "locus_value, subsets match direct lookups") {
    const NkModel m = NkModel::generate(4, 1, 42);
    Rng rng(11);
    const Solution s = random_solution(4, rng);
    std::vector<std::int32_t> all{0, 1, 2, 3};
    CHECK(m.local_score(s, all) == doctest::Approx(m.fitness(s)).epsilon(1e-14));
    std::vector<std::int32_t> one{2};
    CHECK(m.local_score(s, one) == m.locus_value(s, 2));
    std::vector<std::int32_t> pair{0, 2};
    CHECK(m.local_score(s, pair) ==
          doctest::Approx((oracle::locus_value(m, s, 0) +
                           oracle::locus_value(m, s, 2)) /
                          2.0));
    CHECK_THROWS_AS(m.local_score(s, {}), std::invalid_argument);
}

TEST_CASE("same seed reproduces a bit-identical model") {
    const NkModel a = NkModel::generate(40, 6, 777);
    const NkModel b = NkModel::generate(40, 6, 777);
    CHECK(a == b);
    const NkModel c = NkModel::generate(40, 6, 778);
    CHECK(!(a == c));
}

TEST_CASE("payoffs lie in [0,1]") {
    const NkModel m = NkModel::generate(30, 5, 4);
    for (int i = 0; i < m.n(); ++i)
        for (double v : m.table(i)) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
}

TEST_CASE("serialization round-trips exactly") {
    const NkModel m = NkModel::generate(17, 3, 0xabcdef);
    std::stringstream first;
    m.save(first);
    const NkModel back = NkModel::load(first);
    CHECK(back == m);
    std::stringstream second;
    back.save(second);
    CHECK(first.str() == second.str());

    std::stringstream broken("nkmodel 1\nn 2\nk 1\nbogus\n");
    CHECK_THROWS_AS(NkModel::load(broken), std::runtime_error);
}
