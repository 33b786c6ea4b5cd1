#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace nkc::project {

/// Ordered assessment grades with integer ranks. The default follows the
/// WikiProject ladder; the scale is configurable because A's position
/// relative to GA is a matter of convention.
struct GradeScale {
    std::vector<std::string> labels;  // rank order
    std::vector<int> ranks;           // strictly increasing
    /// Articles count toward performance once they reach this rank.
    int performance_rank = 0;

    static GradeScale default_scale();  // Stub..FA, performance from GA
    /// "Stub=0,Start=1,..." plus the label whose rank starts counting as
    /// performing (empty -> highest rank present among GA/FA, else max).
    static GradeScale parse(const std::string& spec,
                            const std::string& performance_label = "");

    std::optional<int> rank_of(const std::string& label) const;
    int require_rank(const std::string& label) const;
};

struct Transition {
    std::string project;
    std::string article;
    std::string timestamp;     // as read (ISO-8601)
    std::int64_t time_key = 0; // parsed, for ordering checks
    std::string old_grade;
    std::string new_grade;
    long long revisions = 0;   // since the article's previous transition
};

/// Per-article grade transition records.
/// CSV format: header `project,article,timestamp,old_grade,new_grade,revisions`,
/// ISO-8601 timestamps, grades drawn from the scale, revisions >= 0,
/// timestamps non-decreasing within each (project, article).
struct TransitionLog {
    std::vector<Transition> records;

    static TransitionLog read_csv(std::istream& in, const GradeScale& scale);
};

std::int64_t parse_iso8601(const std::string& timestamp);

/// E(W,G): inverse mean revisions per grade level over transitions from
/// below G to >= G; a transition spanning several levels spreads its
/// revisions evenly across them (r/g per level). Throws std::domain_error
/// when no transition qualifies or no revisions were recorded.
double efficiency(const TransitionLog& log, const std::string& project,
                  const std::string& grade, const GradeScale& scale);

/// P(W): fraction of the project's articles that ever reach the
/// performance rank (GA/FA by default). Throws on an unknown project.
double performance(const TransitionLog& log, const std::string& project,
                   const GradeScale& scale);

/// Checks the three defining properties of E on the given data by
/// perturbing it: one more qualifying transition at fixed revisions must
/// raise E, extra revisions at fixed transitions must lower it, and
/// duplicating the whole project must not move it.
struct AxiomReport {
    bool transition_added_increases = false;
    bool revisions_added_decreases = false;
    bool duplication_invariant = false;
    bool all_hold() const {
        return transition_added_increases && revisions_added_decreases &&
               duplication_invariant;
    }
};

AxiomReport axioms_check(const TransitionLog& log, const std::string& project,
                         const std::string& grade, const GradeScale& scale);

struct ProjectStats {
    std::string project;
    std::optional<double> e_a, e_b, e_c;
    double performance = 0.0;
    std::size_t articles = 0;
};

std::vector<ProjectStats> compute_project_stats(const TransitionLog& log,
                                                const GradeScale& scale);

/// `project,E_A,E_B,E_C,P,n_articles`; undefined efficiencies stay empty.
void write_stats_csv(const std::vector<ProjectStats>& stats,
                     std::ostream& out);

}  // namespace nkc::project
