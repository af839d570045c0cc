#pragma once

#include <vector>

#include "grafcet/analysis.hpp"
#include "grafcet/finding.hpp"
#include "grafcet/varapprox.hpp"

namespace grafcet {

enum class Truth { False, True, Unknown };

std::string_view to_string(Truth t);

// Abstract evaluation context: variable approximations plus step
// reachability.
class AbstractEnv {
public:
    AbstractEnv(const GrafcetSpec& spec, const std::vector<VarApprox>& vars, const std::vector<PartialAnalysis>& partials);

    struct Value {
        BoolSet b;
        Interval i;
    };

    Value eval(const Expr& e) const;
    Truth truth(const Expr& condition) const;
    const VarApprox* variable(std::string_view name) const;
    bool step_reachable(std::string_view partial, std::string_view step) const;

private:
    const GrafcetSpec& spec_;
    const std::vector<VarApprox>& vars_;
    const std::vector<PartialAnalysis>& partials_;
};

// Stored writers of one variable on the same or concurrent steps (errors),
// a deactivation writer and an activation writer coupled by one transition
// (errors), stored/continuous overlap on an output (errors), and continuous
// writers read by a concurrent stored value expression (info).
std::vector<Finding> detect_races(const GrafcetSpec& spec, const GlobalConcurrency& conc);

// Unsatisfiable conditions (errors) and constant-true conditions without any
// variable (info).
std::vector<Finding> check_conditions(const GrafcetSpec& spec, const AbstractEnv& env);

// Unreachable steps and reachable steps whose activation count is unbounded.
std::vector<Finding> structural_findings(const GrafcetSpec& spec, const HierarchyGraph& graph,
                                         const std::vector<PartialAnalysis>& partials);

struct QueryOptions {
    bool naive = false;  // decide never-coactive from value sets only
};

// One query-violation error per violated query; unknown references become
// invalid-model errors.
std::vector<Finding> run_queries(const GrafcetSpec& spec, const std::vector<SafetyQuery>& queries,
                                 const GlobalConcurrency& conc,
                                 const AbstractEnv& env, const QueryOptions& opts = {});

}  // namespace grafcet
