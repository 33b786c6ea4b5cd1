#include "nkc/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <condition_variable>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <boost/math/distributions/students_t.hpp>

#include "nkc/text.hpp"

namespace nkc {

SweepSpec SweepSpec::paper() { return SweepSpec{}; }

SweepSpec SweepSpec::desk() {
    SweepSpec s;
    s.trials = 20;
    s.n = 100;
    return s;
}

std::vector<StrategyConfig> SweepSpec::effective_strategies() const {
    if (!strategies.empty()) return strategies;
    std::vector<StrategyConfig> all;
    for (StrategyKind k : all_strategies()) all.push_back({k, 3});
    return all;
}

std::uint64_t SweepSpec::trial_seed(std::size_t strategy_index,
                                    std::size_t p_index, int trial) const {
    return derive_seed(
        derive_seed(derive_seed(master_seed, 1000 + strategy_index), p_index),
        static_cast<std::uint64_t>(trial));
}

std::uint64_t SweepSpec::world_seed(std::size_t p_index, int trial) const {
    return derive_seed(derive_seed(derive_seed(master_seed, 0x776f726c64),
                                   p_index),
                       static_cast<std::uint64_t>(trial));
}

namespace {

TrialSpec cell_spec(const SweepSpec& sweep, const StrategyConfig& strategy,
                    std::size_t si, std::size_t pi, int trial) {
    TrialSpec spec;
    spec.n = sweep.n;
    spec.k = sweep.k;
    spec.rewire_p = sweep.rewire_values[pi];
    spec.strategy = strategy;
    spec.iterations = sweep.iterations;
    spec.seed = sweep.trial_seed(si, pi, trial);
    spec.rewire_home_exempt = sweep.rewire_home_exempt;
    if (sweep.paired) spec.world_seed = sweep.world_seed(pi, trial);
    return spec;
}

TrialRow row_from(const TrialSpec& spec, const TrialResult& r) {
    TrialRow row;
    row.strategy = spec.strategy.kind;
    row.n = spec.n;
    row.k = spec.k;
    row.rewire_p = spec.rewire_p;
    row.seed = spec.seed;
    row.mean_degree = r.network.mean_degree;
    row.path_length = r.network.path_length;
    row.performance = r.performance;
    row.efficiency = r.efficiency;
    row.converged_at = r.converged_at;
    return row;
}

std::string row_csv(const TrialRow& r) {
    std::string s;
    s += strategy_name(r.strategy);
    s += ',' + std::to_string(r.n) + ',' + std::to_string(r.k) + ',';
    s += fmt_double(r.rewire_p) + ',' + std::to_string(r.seed) + ',';
    s += fmt_double(r.mean_degree) + ',' + fmt_double(r.path_length) + ',';
    s += fmt_double(r.performance) + ',' + fmt_double(r.efficiency) + ',';
    s += std::to_string(r.converged_at);
    return s;
}

TrialRow row_from_csv(const std::vector<std::string>& f, std::size_t lineno) {
    if (f.size() != 10)
        throw std::runtime_error("results line " + std::to_string(lineno) +
                                 ": expected 10 fields");
    TrialRow r;
    const auto kind = parse_strategy(f[0]);
    if (!kind)
        throw std::runtime_error("results line " + std::to_string(lineno) +
                                 ": unknown strategy '" + f[0] + "'");
    r.strategy = *kind;
    r.n = static_cast<int>(parse_int(f[1]));
    r.k = static_cast<int>(parse_int(f[2]));
    r.rewire_p = parse_double(f[3]);
    r.seed = parse_uint(f[4]);
    r.mean_degree = parse_double(f[5]);
    r.path_length = parse_double(f[6]);
    r.performance = parse_double(f[7]);
    r.efficiency = parse_double(f[8]);
    r.converged_at = static_cast<int>(parse_int(f[9]));
    return r;
}

}  // namespace

void write_rows_csv(std::span<const TrialRow> rows, std::ostream& out) {
    out << trial_csv_header() << '\n';
    for (const TrialRow& r : rows) out << row_csv(r) << '\n';
}

std::vector<TrialRow> read_rows_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) ||
        split_csv(line) != split_csv(trial_csv_header()))
        throw std::runtime_error("results CSV: bad or missing header");
    std::vector<TrialRow> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        rows.push_back(row_from_csv(split_csv(line), lineno));
    }
    return rows;
}

std::vector<TrialRow> run_sweep(const SweepSpec& sweep,
                                const std::string& checkpoint_path,
                                const ProgressFn& progress) {
    if (sweep.trials < 1) throw std::invalid_argument("trials must be >= 1");
    for (double p : sweep.rewire_values)
        if (!(p >= 0.0 && p <= 1.0))
            throw std::invalid_argument("rewire value outside [0,1]");
    const auto strategies = sweep.effective_strategies();

    struct Cell {
        TrialSpec spec;
        bool done = false;
        TrialRow row;
    };
    std::vector<Cell> cells;
    cells.reserve(strategies.size() * sweep.rewire_values.size() *
                  sweep.trials);
    for (std::size_t si = 0; si < strategies.size(); ++si)
        for (std::size_t pi = 0; pi < sweep.rewire_values.size(); ++pi)
            for (int t = 0; t < sweep.trials; ++t)
                cells.push_back(
                    {cell_spec(sweep, strategies[si], si, pi, t), false, {}});

    // Resume: a finished cell is identified by its unique seed.
    if (!checkpoint_path.empty() &&
        std::filesystem::exists(checkpoint_path)) {
        std::ifstream in(checkpoint_path);
        std::map<std::uint64_t, TrialRow> done;
        for (const TrialRow& r : read_rows_csv(in)) done.emplace(r.seed, r);
        for (Cell& c : cells) {
            auto it = done.find(c.spec.seed);
            if (it != done.end()) {
                c.done = true;
                c.row = it->second;
            }
        }
    }

    std::vector<std::size_t> pending;
    for (std::size_t i = 0; i < cells.size(); ++i)
        if (!cells[i].done) pending.push_back(i);

    std::vector<char> was_pending(cells.size(), 0);
    for (std::size_t i : pending) was_pending[i] = 1;

    std::mutex mu;
    std::condition_variable cv;
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    bool aborted = false;
    auto worker = [&] {
        for (;;) {
            const std::size_t at = next.fetch_add(1);
            if (at >= pending.size()) return;
            Cell& cell = cells[pending[at]];
            try {
                const TrialResult result = run_trial(cell.spec);
                std::lock_guard<std::mutex> lock(mu);
                cell.row = row_from(cell.spec, result);
                cell.done = true;
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (!first_error) first_error = std::current_exception();
                aborted = true;
                next.store(pending.size());  // drain remaining work
            }
            cv.notify_all();
        }
    };

    int workers = sweep.workers > 0
                      ? sweep.workers
                      : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::max(1, std::min<int>(workers,
                                        static_cast<int>(pending.size())));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);

    // Rows are appended in canonical order regardless of completion order,
    // so a fresh complete run is byte-reproducible.
    std::ofstream out;
    if (!checkpoint_path.empty()) {
        const bool fresh = !std::filesystem::exists(checkpoint_path);
        out.open(checkpoint_path, std::ios::app);
        if (!out)
            throw std::runtime_error("cannot open checkpoint file: " +
                                     checkpoint_path);
        if (fresh) out << trial_csv_header() << '\n';
    }
    std::size_t finished = cells.size() - pending.size();
    {
        std::unique_lock<std::mutex> lock(mu);
        for (std::size_t i = 0; i < cells.size(); ++i) {
            cv.wait(lock, [&] { return cells[i].done || aborted; });
            if (aborted && !cells[i].done) break;
            if (was_pending[i]) {
                if (out.is_open()) {
                    out << row_csv(cells[i].row) << '\n';
                    out.flush();
                }
                ++finished;
                if (progress) progress(finished, cells.size());
            }
        }
    }
    for (std::thread& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);

    std::vector<TrialRow> rows;
    rows.reserve(cells.size());
    for (const Cell& c : cells) rows.push_back(c.row);
    return rows;
}

const char* outcome_name(Outcome o) {
    return o == Outcome::performance ? "performance" : "efficiency";
}

namespace {

double outcome_of(const TrialRow& r, Outcome o) {
    return o == Outcome::performance ? r.performance : r.efficiency;
}

struct MeanStd {
    double mean = 0.0;
    double sd = 0.0;  // sample (n-1)
};

MeanStd mean_std(const std::vector<double>& v) {
    MeanStd ms;
    const std::size_t m = v.size();
    for (double x : v) ms.mean += x;
    ms.mean /= static_cast<double>(m);
    if (m > 1) {
        double ss = 0.0;
        for (double x : v) ss += (x - ms.mean) * (x - ms.mean);
        ms.sd = std::sqrt(ss / static_cast<double>(m - 1));
    }
    return ms;
}

}  // namespace

RegressionResult standardized_degree_regression(std::span<const TrialRow> rows,
                                                StrategyKind strategy,
                                                Outcome outcome) {
    std::vector<double> x, y;
    for (const TrialRow& r : rows) {
        if (r.strategy != strategy) continue;
        x.push_back(r.mean_degree);
        y.push_back(outcome_of(r, outcome));
    }
    const std::size_t m = x.size();
    if (m < 3)
        throw std::invalid_argument(
            "degree regression needs at least 3 trials");
    const MeanStd mx = mean_std(x), my = mean_std(y);
    if (mx.sd == 0.0 || my.sd == 0.0)
        throw std::domain_error("degree regression: zero variance");
    double r = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        r += ((x[i] - mx.mean) / mx.sd) * ((y[i] - my.mean) / my.sd);
    r /= static_cast<double>(m - 1);

    RegressionResult result;
    result.slope = r;
    result.samples = m;
    const double r2 = std::min(r * r, 1.0);
    if (r2 >= 1.0) {
        result.p_value = 0.0;
    } else {
        const double t =
            std::abs(r) * std::sqrt(static_cast<double>(m - 2) / (1.0 - r2));
        boost::math::students_t dist(static_cast<double>(m - 2));
        result.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, t));
    }
    return result;
}

std::vector<StrategySummary> summarize(std::span<const TrialRow> rows,
                                       double rewire_p) {
    std::vector<StrategySummary> out;
    for (StrategyKind kind : all_strategies()) {
        std::vector<double> perf, eff, deg, path;
        for (const TrialRow& r : rows) {
            if (r.strategy != kind || r.rewire_p != rewire_p) continue;
            perf.push_back(r.performance);
            eff.push_back(r.efficiency);
            deg.push_back(r.mean_degree);
            path.push_back(r.path_length);
        }
        if (perf.empty()) continue;
        StrategySummary s;
        s.strategy = kind;
        s.trials = perf.size();
        const MeanStd mp = mean_std(perf), me = mean_std(eff);
        s.performance_mean = mp.mean;
        s.efficiency_mean = me.mean;
        if (perf.size() > 1) {
            const double root = std::sqrt(static_cast<double>(perf.size()));
            s.performance_se = mp.sd / root;
            s.efficiency_se = me.sd / root;
        }
        s.degree_mean = mean_std(deg).mean;
        s.path_mean = mean_std(path).mean;
        out.push_back(s);
    }
    return out;
}

NetworkSummary network_summary(std::span<const TrialRow> rows) {
    std::vector<double> deg, path;
    for (const TrialRow& r : rows) {
        deg.push_back(r.mean_degree);
        path.push_back(r.path_length);
    }
    if (deg.empty()) throw std::invalid_argument("no rows");
    NetworkSummary s;
    s.count = deg.size();
    const MeanStd md = mean_std(deg), mp = mean_std(path);
    s.degree_mean = md.mean;
    s.path_mean = mp.mean;
    s.degree_cv = md.mean != 0.0 ? md.sd / md.mean : 0.0;
    s.path_cv = mp.mean != 0.0 ? mp.sd / mp.mean : 0.0;
    return s;
}

namespace {

struct PaperRow {
    StrategyKind kind;
    double performance;
    double efficiency;
};

constexpr PaperRow kPaperTable[] = {
    {StrategyKind::best_i, 0.722, 0.0221},
    {StrategyKind::conf_i, 0.721, 0.0174},
    {StrategyKind::best_li, 0.726, 0.0131},
    {StrategyKind::conf_li, 0.586, 0.030},
    {StrategyKind::lmaj_li, 0.729, 0.046},
};

constexpr double kPaperMeanDegree = 116.6;
constexpr double kPaperPathLength = 1.766;

const StrategySummary* find_summary(const std::vector<StrategySummary>& s,
                                    StrategyKind kind) {
    for (const auto& x : s)
        if (x.strategy == kind) return &x;
    return nullptr;
}

std::string fmt3(double v) {
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

}  // namespace

std::vector<CheckResult> verify_results(std::span<const TrialRow> rows,
                                        bool paper_scale) {
    std::vector<CheckResult> checks;
    auto add = [&](std::string name, bool pass, std::string detail) {
        checks.push_back({std::move(name), pass, std::move(detail)});
    };

    const auto at_p0 = summarize(rows, 0.0);
    if (at_p0.size() != 5) {
        add("p=0 summaries", false,
            "expected all five strategies at rewire_p=0");
        return checks;
    }

    // Mean performance per strategy (absolute values gate at paper scale).
    if (paper_scale) {
        for (const PaperRow& ref : kPaperTable) {
            const auto* s = find_summary(at_p0, ref.kind);
            const double diff = s->performance_mean - ref.performance;
            add(std::string("performance ") + strategy_name(ref.kind),
                std::abs(diff) <= 0.02,
                fmt3(s->performance_mean) + " vs " + fmt3(ref.performance) +
                    " (tol 0.02)");
        }
        for (const PaperRow& ref : kPaperTable) {
            const auto* s = find_summary(at_p0, ref.kind);
            const double rel =
                std::abs(s->efficiency_mean - ref.efficiency) / ref.efficiency;
            add(std::string("efficiency ") + strategy_name(ref.kind),
                rel <= 0.30,
                fmt3(s->efficiency_mean) + " vs " + fmt3(ref.efficiency) +
                    " (tol 30%)");
        }
    }

    // Rank orders at p=0.
    {
        const auto perf_of = [&](StrategyKind k) {
            return find_summary(at_p0, k)->performance_mean;
        };
        bool worst = true;
        for (StrategyKind k : all_strategies())
            if (k != StrategyKind::conf_li)
                worst &= perf_of(StrategyKind::conf_li) < perf_of(k);
        bool best = true;
        for (StrategyKind k : all_strategies())
            if (k != StrategyKind::lmaj_li)
                best &= perf_of(StrategyKind::lmaj_li) > perf_of(k);
        add("performance rank order", worst && best,
            "Conf+LI strictly worst and LMaj+LI highest");
    }
    {
        const StrategyKind order[] = {StrategyKind::lmaj_li,
                                      StrategyKind::conf_li,
                                      StrategyKind::best_i,
                                      StrategyKind::conf_i,
                                      StrategyKind::best_li};
        bool ok = true;
        std::string chain;
        for (std::size_t i = 0; i < 5; ++i) {
            const double e = find_summary(at_p0, order[i])->efficiency_mean;
            if (i) chain += " > ";
            chain += fmt3(e);
            if (i + 1 < 5)
                ok &= e > find_summary(at_p0, order[i + 1])->efficiency_mean;
        }
        add("efficiency rank order", ok,
            "LMaj+LI > Conf+LI > Best+I > Conf+I > Best+LI: " + chain);
    }

    // Degree regression signs (needs the full sweep's degree variation).
    if (paper_scale) {
        struct SignCheck {
            StrategyKind kind;
            Outcome outcome;
            int sign;  // 0 = not significant
        };
        const SignCheck sign_checks[] = {
            {StrategyKind::best_i, Outcome::performance, 0},
            {StrategyKind::best_i, Outcome::efficiency, 0},
            {StrategyKind::conf_i, Outcome::performance, 0},
            {StrategyKind::conf_i, Outcome::efficiency, 0},
            {StrategyKind::best_li, Outcome::performance, -1},
            {StrategyKind::conf_li, Outcome::performance, -1},
            {StrategyKind::conf_li, Outcome::efficiency, +1},
            {StrategyKind::lmaj_li, Outcome::performance, +1},
            {StrategyKind::lmaj_li, Outcome::efficiency, -1},
        };
        double max_abs_slope = 0.0;
        for (StrategyKind k : all_strategies())
            for (Outcome o : {Outcome::performance, Outcome::efficiency}) {
                const auto reg = standardized_degree_regression(rows, k, o);
                max_abs_slope = std::max(max_abs_slope, std::abs(reg.slope));
            }
        for (const SignCheck& sc : sign_checks) {
            const auto reg =
                standardized_degree_regression(rows, sc.kind, sc.outcome);
            const bool significant = reg.p_value < 0.05;
            bool pass = false;
            std::string want;
            if (sc.sign == 0) {
                pass = !significant;
                want = "not significant";
            } else {
                pass = significant && (sc.sign < 0 ? reg.slope < 0.0
                                                   : reg.slope > 0.0);
                want = sc.sign < 0 ? "negative, p<0.05" : "positive, p<0.05";
            }
            add(std::string("degree slope ") + strategy_name(sc.kind) + " " +
                    outcome_name(sc.outcome),
                pass,
                "slope " + fmt3(reg.slope) + ", p " + fmt3(reg.p_value) +
                    ", expected " + want);
        }
        const auto lmaj_eff = standardized_degree_regression(
            rows, StrategyKind::lmaj_li, Outcome::efficiency);
        add("LMaj+LI efficiency largest degree effect",
            std::abs(lmaj_eff.slope) >= max_abs_slope,
            "|" + fmt3(lmaj_eff.slope) + "| vs max |" + fmt3(max_abs_slope) +
                "|");
    }

    // Network statistics across the sweep.
    if (paper_scale) {
        const NetworkSummary net = network_summary(rows);
        add("grand mean degree",
            std::abs(net.degree_mean - kPaperMeanDegree) <=
                0.10 * kPaperMeanDegree,
            fmt3(net.degree_mean) + " vs 116.6 (tol 10%)");
        add("grand mean path length",
            std::abs(net.path_mean - kPaperPathLength) <=
                0.05 * kPaperPathLength,
            fmt3(net.path_mean) + " vs 1.766 (tol 5%)");
        add("degree CV dominates path CV",
            net.degree_cv > 5.0 * net.path_cv,
            "CV(degree) " + fmt3(net.degree_cv) + " vs 5 x CV(path) " +
                fmt3(5.0 * net.path_cv));
    }

    // Convergence before the final iteration, every trial.
    {
        std::size_t bad = 0;
        for (const TrialRow& r : rows) bad += r.converged_at >= 300 ? 1 : 0;
        add("all trials converged early", bad == 0,
            std::to_string(rows.size() - bad) + "/" +
                std::to_string(rows.size()) +
                " converged before iteration 300");
    }

    return checks;
}

}  // namespace nkc
