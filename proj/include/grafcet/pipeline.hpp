#pragma once

#include <string>
#include <vector>

#include "grafcet/analysis.hpp"
#include "grafcet/checks.hpp"
#include "grafcet/hierarchy.hpp"
#include "grafcet/varapprox.hpp"

namespace grafcet {

struct AnalysisOptions {
    unsigned jobs = 0;  // 0: one worker per logical core
    bool naive = false;
    std::vector<SafetyQuery> extra_queries;
    InvariantOptions invariants;
    ReachOptions reach;
};

struct PhaseTiming {
    std::string phase;
    double ms = 0;
};

struct AnalysisResult {
    GrafcetSpec spec;
    HierarchyGraph hierarchy;
    std::vector<PartialAnalysis> partials;  // indexed like spec.partials
    GlobalConcurrency concurrency;
    ExecutionBounds bounds;
    std::vector<VarApprox> variables;
    std::vector<Finding> findings;  // canonical order
    std::vector<PhaseTiming> timings;
    bool valid = true;  // false when validate() reported errors; nothing else ran

    const PartialAnalysis* partial(std::string_view id) const;
    const VarApprox* variable(std::string_view name) const;
    std::size_t count(FindingKind kind) const;
    Severity max_severity() const;
};

// hierarchy -> reachability/concurrency per situation -> invariants ->
// hierarchy lift -> execution bounds -> variables -> checks.
AnalysisResult analyze(const GrafcetSpec& spec, const AnalysisOptions& opts = {});

}  // namespace grafcet
