#include "grafcet/finding.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <tuple>

namespace grafcet {

std::string_view to_string(FindingKind k)
{
    switch (k) {
    case FindingKind::InvalidModel: return "invalid-model";
    case FindingKind::Race: return "race";
    case FindingKind::UnsatCondition: return "unsat-condition";
    case FindingKind::AlwaysTrueCondition: return "always-true-condition";
    case FindingKind::UnreachableStep: return "unreachable-step";
    case FindingKind::UnboundedActivation: return "unbounded-activation";
    case FindingKind::HierarchyCycle: return "hierarchy-cycle";
    case FindingKind::DeadPartial: return "dead-partial";
    case FindingKind::AnalysisIncomplete: return "analysis-incomplete";
    case FindingKind::QueryViolation: return "query-violation";
    }
    return "unknown";
}

std::string_view to_string(Severity s)
{
    switch (s) {
    case Severity::Info: return "info";
    case Severity::Warning: return "warning";
    case Severity::Error: return "error";
    }
    return "unknown";
}

bool parse_severity(std::string_view text, Severity& out)
{
    for (Severity s : {Severity::Info, Severity::Warning, Severity::Error}) {
        if (to_string(s) == text) {
            out = s;
            return true;
        }
    }
    return false;
}

std::string Finding::id() const
{
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::string_view s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ull;
        }
        h ^= 0xff;
        h *= 1099511628211ull;
    };
    mix(to_string(kind));
    mix(location.partial);
    mix(location.element);
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void sort_findings(std::vector<Finding>& findings)
{
    std::stable_sort(findings.begin(), findings.end(), [](const Finding& a, const Finding& b) {
        return std::tie(a.kind, a.location.partial, a.location.element, a.message) <
               std::tie(b.kind, b.location.partial, b.location.element, b.message);
    });
}

nlohmann::json to_json(const Finding& f)
{
    return {
        {"id", f.id()},
        {"kind", to_string(f.kind)},
        {"severity", to_string(f.severity)},
        {"location", {{"partial", f.location.partial}, {"element", f.location.element}}},
        {"message", f.message},
        {"evidence", f.evidence},
    };
}

}  // namespace grafcet
