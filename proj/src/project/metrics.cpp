#include "nkc/project/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "nkc/text.hpp"

namespace nkc::project {

GradeScale GradeScale::default_scale() {
    GradeScale s;
    s.labels = {"Stub", "Start", "C", "B", "A", "GA", "FA"};
    s.ranks = {0, 1, 2, 3, 4, 5, 6};
    s.performance_rank = 5;  // GA
    return s;
}

GradeScale GradeScale::parse(const std::string& spec,
                             const std::string& performance_label) {
    GradeScale s;
    std::istringstream in(spec);
    std::string item;
    while (std::getline(in, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("grade scale item needs label=rank: " +
                                        item);
        std::string label = item.substr(0, eq);
        const int rank = static_cast<int>(parse_int(item.substr(eq + 1)));
        if (label.empty())
            throw std::invalid_argument("empty grade label");
        if (s.rank_of(label))
            throw std::invalid_argument("duplicate grade label: " + label);
        if (!s.ranks.empty() && rank <= s.ranks.back())
            throw std::invalid_argument("grade ranks must strictly increase");
        s.labels.push_back(std::move(label));
        s.ranks.push_back(rank);
    }
    if (s.labels.empty()) throw std::invalid_argument("empty grade scale");
    if (!performance_label.empty()) {
        s.performance_rank = s.require_rank(performance_label);
    } else if (auto ga = s.rank_of("GA")) {
        s.performance_rank = *ga;
    } else {
        s.performance_rank = s.ranks.back();
    }
    return s;
}

std::optional<int> GradeScale::rank_of(const std::string& label) const {
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == label) return ranks[i];
    return std::nullopt;
}

int GradeScale::require_rank(const std::string& label) const {
    if (auto r = rank_of(label)) return *r;
    throw std::invalid_argument("grade not in scale: " + label);
}

namespace {

// Days since the civil epoch (1970-01-01); standard civil calendar math.
std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

}  // namespace

std::int64_t parse_iso8601(const std::string& ts) {
    // YYYY-MM-DD[THH:MM:SS[Z]]
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, se = 0;
    char t = 0;
    const int fields =
        std::sscanf(ts.c_str(), "%4d-%2d-%2d%c%2d:%2d:%2d", &y, &mo, &d, &t,
                    &h, &mi, &se);
    const bool date_only = fields == 3;
    const bool full = fields == 7 && (t == 'T' || t == ' ');
    if (!date_only && !full)
        throw std::runtime_error("bad ISO-8601 timestamp: '" + ts + "'");
    if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || se > 60)
        throw std::runtime_error("bad ISO-8601 timestamp: '" + ts + "'");
    return days_from_civil(y, mo, d) * 86400 + h * 3600 + mi * 60 + se;
}

TransitionLog TransitionLog::read_csv(std::istream& in,
                                      const GradeScale& scale) {
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("transition log: empty input");
    {
        auto header = split_csv(line);
        const std::vector<std::string> expect = {
            "project", "article", "timestamp", "old_grade", "new_grade",
            "revisions"};
        if (std::vector<std::string>(header.begin(), header.end()) != expect)
            throw std::runtime_error(
                "transition log: expected header "
                "project,article,timestamp,old_grade,new_grade,revisions");
    }
    TransitionLog log;
    std::map<std::pair<std::string, std::string>, std::int64_t> last_seen;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        auto f = split_csv(line);
        if (f.size() != 6)
            throw std::runtime_error("transition log line " +
                                     std::to_string(lineno) +
                                     ": expected 6 fields");
        Transition tr;
        tr.project = f[0];
        tr.article = f[1];
        tr.timestamp = f[2];
        tr.time_key = parse_iso8601(f[2]);
        tr.old_grade = f[3];
        tr.new_grade = f[4];
        tr.revisions = parse_int(f[5]);
        scale.require_rank(tr.old_grade);
        scale.require_rank(tr.new_grade);
        if (tr.revisions < 0)
            throw std::runtime_error("transition log line " +
                                     std::to_string(lineno) +
                                     ": negative revisions");
        auto key = std::make_pair(tr.project, tr.article);
        auto it = last_seen.find(key);
        if (it != last_seen.end() && tr.time_key < it->second)
            throw std::runtime_error(
                "transition log line " + std::to_string(lineno) +
                ": timestamps must be non-decreasing per article");
        last_seen[key] = tr.time_key;
        log.records.push_back(std::move(tr));
    }
    return log;
}

namespace {

struct EffAccumulator {
    double sum_r_over_g = 0.0;
    std::unordered_set<std::string> articles;
    std::size_t transitions = 0;
};

/// Streams one record into the grade-G accumulator if it qualifies
/// (crosses from below G to >= G).
void accumulate(EffAccumulator& acc, const Transition& tr, int grade_rank,
                const GradeScale& scale) {
    const int from = scale.require_rank(tr.old_grade);
    const int to = scale.require_rank(tr.new_grade);
    if (!(from < grade_rank && grade_rank <= to)) return;
    const int levels = to - from;  // "grade levels crossed", > 0 here
    acc.sum_r_over_g +=
        static_cast<double>(tr.revisions) / static_cast<double>(levels);
    acc.articles.insert(tr.article);
    ++acc.transitions;
}

double finish(const EffAccumulator& acc) {
    if (acc.transitions == 0)
        throw std::domain_error(
            "efficiency undefined: no qualifying transitions");
    if (acc.sum_r_over_g <= 0.0)
        throw std::domain_error("efficiency undefined: no revisions recorded");
    return static_cast<double>(acc.articles.size()) / acc.sum_r_over_g;
}

}  // namespace

double efficiency(const TransitionLog& log, const std::string& project,
                  const std::string& grade, const GradeScale& scale) {
    const int grade_rank = scale.require_rank(grade);
    EffAccumulator acc;
    for (const Transition& tr : log.records)
        if (tr.project == project) accumulate(acc, tr, grade_rank, scale);
    return finish(acc);
}

double performance(const TransitionLog& log, const std::string& project,
                   const GradeScale& scale) {
    std::unordered_set<std::string> articles, reached;
    for (const Transition& tr : log.records) {
        if (tr.project != project) continue;
        articles.insert(tr.article);
        if (scale.require_rank(tr.new_grade) >= scale.performance_rank)
            reached.insert(tr.article);
    }
    if (articles.empty())
        throw std::invalid_argument("performance undefined: empty project");
    return static_cast<double>(reached.size()) /
           static_cast<double>(articles.size());
}

AxiomReport axioms_check(const TransitionLog& log, const std::string& project,
                         const std::string& grade, const GradeScale& scale) {
    const double base = efficiency(log, project, grade, scale);
    AxiomReport report;

    // One more article crossing G, zero additional revisions.
    {
        TransitionLog probe = log;
        Transition extra;
        for (const Transition& tr : log.records) {
            const int from = scale.require_rank(tr.old_grade);
            const int to = scale.require_rank(tr.new_grade);
            if (tr.project == project && from < scale.require_rank(grade) &&
                scale.require_rank(grade) <= to) {
                extra = tr;
                break;
            }
        }
        extra.article += "#axiom-probe";
        extra.revisions = 0;
        probe.records.push_back(extra);
        report.transition_added_increases =
            efficiency(probe, project, grade, scale) > base;
    }

    // One more revision on an existing qualifying transition.
    {
        TransitionLog probe = log;
        for (Transition& tr : probe.records) {
            const int from = scale.require_rank(tr.old_grade);
            const int to = scale.require_rank(tr.new_grade);
            if (tr.project == project && from < scale.require_rank(grade) &&
                scale.require_rank(grade) <= to) {
                ++tr.revisions;
                break;
            }
        }
        report.revisions_added_decreases =
            efficiency(probe, project, grade, scale) < base;
    }

    // Self-duplication: every article cloned once.
    {
        TransitionLog probe = log;
        const std::size_t count = probe.records.size();
        for (std::size_t i = 0; i < count; ++i) {
            if (probe.records[i].project != project) continue;
            Transition clone = probe.records[i];
            clone.article += "#duplicate";
            probe.records.push_back(std::move(clone));
        }
        const double dup = efficiency(probe, project, grade, scale);
        report.duplication_invariant = std::abs(dup - base) <= 1e-12 * base;
    }

    return report;
}

std::vector<ProjectStats> compute_project_stats(const TransitionLog& log,
                                                const GradeScale& scale) {
    std::set<std::string> projects;
    for (const Transition& tr : log.records) projects.insert(tr.project);
    std::vector<ProjectStats> out;
    for (const std::string& w : projects) {
        ProjectStats st;
        st.project = w;
        auto try_eff = [&](const char* grade) -> std::optional<double> {
            if (!scale.rank_of(grade)) return std::nullopt;
            try {
                return efficiency(log, w, grade, scale);
            } catch (const std::domain_error&) {
                return std::nullopt;
            }
        };
        st.e_a = try_eff("A");
        st.e_b = try_eff("B");
        st.e_c = try_eff("C");
        st.performance = performance(log, w, scale);
        std::unordered_set<std::string> articles;
        for (const Transition& tr : log.records)
            if (tr.project == w) articles.insert(tr.article);
        st.articles = articles.size();
        out.push_back(std::move(st));
    }
    return out;
}

void write_stats_csv(const std::vector<ProjectStats>& stats,
                     std::ostream& out) {
    out << "project,E_A,E_B,E_C,P,n_articles\n";
    for (const ProjectStats& st : stats) {
        out << csv_escape(st.project) << ',';
        if (st.e_a) out << fmt_double(*st.e_a);
        out << ',';
        if (st.e_b) out << fmt_double(*st.e_b);
        out << ',';
        if (st.e_c) out << fmt_double(*st.e_c);
        out << ',' << fmt_double(st.performance) << ',' << st.articles
            << '\n';
    }
}

}  // namespace nkc::project
