#include "nkc/landscape.hpp"

#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace nkc {

Solution random_solution(int n, Rng& rng) {
    Solution s;
    s.bits.resize(n);
    for (int i = 0; i < n; ++i) s.bits[i] = uniform_bit(rng);
    return s;
}

Solution solution_from_string(const std::string& str) {
    Solution s;
    s.bits.reserve(str.size());
    for (char c : str) {
        if (c != '0' && c != '1')
            throw std::invalid_argument("solution string must be 0/1");
        s.bits.push_back(c - '0');
    }
    return s;
}

NkModel NkModel::generate(int n, int k, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("NK model needs n >= 1");
    if (k < 0 || k >= n)
        throw std::invalid_argument("NK model needs 0 <= k < n");
    if (k + 1 > 24 ||
        (static_cast<std::uint64_t>(n) << (k + 1)) > (1u << 30))
        throw std::invalid_argument("NK payoff tables too large");

    NkModel m;
    m.n_ = n;
    m.k_ = k;
    m.seed_ = seed;
    m.neighbors_.resize(static_cast<std::size_t>(n) * k);
    m.tables_.resize(static_cast<std::size_t>(n) << (k + 1));

    Rng rng(seed);
    for (int i = 0; i < n; ++i) {
        std::int32_t* nb = m.neighbors_.data() + static_cast<std::size_t>(i) * k;
        for (int d = 0; d < k; ++d) {
            // Rejection keeps the draw uniform over the other n-1 loci.
            std::int32_t cand;
            bool fresh;
            do {
                cand = static_cast<std::int32_t>(uniform_below(rng, n));
                fresh = cand != i;
                for (int e = 0; fresh && e < d; ++e) fresh = nb[e] != cand;
            } while (!fresh);
            nb[d] = cand;
        }
        double* tb = m.tables_.data() + (static_cast<std::size_t>(i) << (k + 1));
        for (std::size_t v = 0; v < (std::size_t{1} << (k + 1)); ++v)
            tb[v] = uniform_unit(rng);
    }
    m.build_derived();
    return m;
}

void NkModel::build_derived() {
    const int n = n_, k = k_;
    dep_col_.resize(static_cast<std::size_t>(k + 1) * n);
    for (int i = 0; i < n; ++i) dep_col_[i] = i;
    for (int d = 0; d < k; ++d)
        for (int i = 0; i < n; ++i)
            dep_col_[static_cast<std::size_t>(d + 1) * n + i] =
                neighbors_[static_cast<std::size_t>(i) * k + d];

    // Invert the dependency table into a flip plan: flipping locus j
    // re-indexes the table of every locus that lists j as a dependency.
    std::vector<std::int32_t> counts(n, 0);
    for (int d = 0; d <= k; ++d)
        for (int i = 0; i < n; ++i)
            ++counts[dep_col_[static_cast<std::size_t>(d) * n + i]];
    plan_row_.assign(n + 1, 0);
    for (int j = 0; j < n; ++j) plan_row_[j + 1] = plan_row_[j] + counts[j];
    const std::int32_t entries = plan_row_[n];
    plan_locus_.resize(entries);
    plan_mask_.resize(entries);
    plan_flip_.resize(entries);
    std::vector<std::int32_t> cursor(plan_row_.begin(), plan_row_.end() - 1);
    for (int i = 0; i < n; ++i) {
        for (int d = 0; d <= k; ++d) {
            const std::int32_t j = dep_col_[static_cast<std::size_t>(d) * n + i];
            const std::int32_t at = cursor[j]++;
            plan_locus_[at] = i;
            plan_mask_[at] = 1 << d;
            plan_flip_[at] = j;
        }
    }

    view_ = kernels::ModelView{n, k + 1, dep_col_.data(), tables_.data()};
    plan_ = kernels::FlipPlan{n, plan_row_.data(), plan_locus_.data(),
                              plan_mask_.data(), plan_flip_.data()};
}

void NkModel::check_invariants() const {
    if (n_ < 1 || k_ < 0 || k_ >= n_)
        throw std::runtime_error("NK model: bad n/k");
    for (int i = 0; i < n_; ++i) {
        auto nb = neighbors(i);
        for (int d = 0; d < k_; ++d) {
            if (nb[d] < 0 || nb[d] >= n_ || nb[d] == i)
                throw std::runtime_error("NK model: bad neighbor");
            for (int e = d + 1; e < k_; ++e)
                if (nb[d] == nb[e])
                    throw std::runtime_error("NK model: duplicate neighbor");
        }
    }
    for (double v : tables_)
        if (!(v >= 0.0 && v <= 1.0))
            throw std::runtime_error("NK model: payoff outside [0,1]");
}

double NkModel::locus_value(const Solution& s, int locus) const {
    if (s.size() != n_) throw std::invalid_argument("solution length != n");
    if (locus < 0 || locus >= n_)
        throw std::invalid_argument("locus index out of range");
    std::int32_t idx = s.bits[locus];
    auto nb = neighbors(locus);
    for (int d = 0; d < k_; ++d) idx |= s.bits[nb[d]] << (d + 1);
    return tables_[(static_cast<std::size_t>(locus) << (k_ + 1)) + idx];
}

double NkModel::fitness(const Solution& s) const {
    if (s.size() != n_) throw std::invalid_argument("solution length != n");
    const auto& ops = kernels::active();
    std::vector<std::int32_t> idx(n_);
    std::vector<double> values(n_);
    ops.pack_indices(view_, s.bits.data(), idx.data());
    ops.gather_values(view_, idx.data(), values.data());
    return ops.striped_sum(values.data(), n_) / n_;
}

double NkModel::local_score(const Solution& s,
                            std::span<const std::int32_t> loci) const {
    if (loci.empty())
        throw std::invalid_argument("local_score needs a non-empty locus set");
    double sum = 0.0;
    for (std::int32_t l : loci) sum += locus_value(s, l);
    return sum / static_cast<double>(loci.size());
}

namespace {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%a", v);  // hex float: exact round-trip
    return buf;
}

}  // namespace

void NkModel::save(std::ostream& out) const {
    out << "nkmodel 1\n";
    out << "n " << n_ << "\n";
    out << "k " << k_ << "\n";
    out << "seed " << seed_ << "\n";
    for (int i = 0; i < n_; ++i) {
        out << "locus " << i << "\nnb";
        for (auto nb : neighbors(i)) out << ' ' << nb;
        out << "\ntb";
        for (double v : table(i)) out << ' ' << format_double(v);
        out << '\n';
    }
    out << "end\n";
}

namespace {

[[noreturn]] void parse_fail(const std::string& what) {
    throw std::runtime_error("nkmodel parse error: " + what);
}

std::string next_line(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) parse_fail("unexpected end of file");
    return line;
}

}  // namespace

NkModel NkModel::load(std::istream& in) {
    if (next_line(in) != "nkmodel 1") parse_fail("bad header");
    NkModel m;
    std::string tag;
    {
        std::istringstream ls(next_line(in));
        if (!(ls >> tag >> m.n_) || tag != "n") parse_fail("expected n");
    }
    {
        std::istringstream ls(next_line(in));
        if (!(ls >> tag >> m.k_) || tag != "k") parse_fail("expected k");
    }
    {
        std::istringstream ls(next_line(in));
        if (!(ls >> tag >> m.seed_) || tag != "seed") parse_fail("expected seed");
    }
    if (m.n_ < 1 || m.k_ < 0 || m.k_ >= m.n_ || m.k_ + 1 > 24)
        parse_fail("bad dimensions");
    m.neighbors_.resize(static_cast<std::size_t>(m.n_) * m.k_);
    m.tables_.resize(static_cast<std::size_t>(m.n_) << (m.k_ + 1));
    for (int i = 0; i < m.n_; ++i) {
        std::istringstream hs(next_line(in));
        int got = -1;
        if (!(hs >> tag >> got) || tag != "locus" || got != i)
            parse_fail("expected locus " + std::to_string(i));
        std::istringstream ns(next_line(in));
        if (!(ns >> tag) || tag != "nb") parse_fail("expected nb");
        for (int d = 0; d < m.k_; ++d)
            if (!(ns >> m.neighbors_[static_cast<std::size_t>(i) * m.k_ + d]))
                parse_fail("short neighbor list");
        std::istringstream ts(next_line(in));
        if (!(ts >> tag) || tag != "tb") parse_fail("expected tb");
        double* tb = m.tables_.data() + (static_cast<std::size_t>(i) << (m.k_ + 1));
        for (std::size_t v = 0; v < (std::size_t{1} << (m.k_ + 1)); ++v) {
            std::string word;
            if (!(ts >> word)) parse_fail("short payoff table");
            char* endp = nullptr;
            tb[v] = std::strtod(word.c_str(), &endp);
            if (endp == word.c_str() || *endp != '\0')
                parse_fail("bad payoff value '" + word + "'");
        }
    }
    if (next_line(in) != "end") parse_fail("missing end marker");
    m.check_invariants();
    m.build_derived();
    return m;
}

bool NkModel::operator==(const NkModel& other) const {
    return n_ == other.n_ && k_ == other.k_ && seed_ == other.seed_ &&
           neighbors_ == other.neighbors_ && tables_ == other.tables_;
}

}  // namespace nkc
