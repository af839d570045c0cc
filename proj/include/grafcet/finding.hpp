#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace grafcet {

enum class FindingKind {
    InvalidModel,
    Race,
    UnsatCondition,
    AlwaysTrueCondition,
    UnreachableStep,
    UnboundedActivation,
    HierarchyCycle,
    DeadPartial,
    AnalysisIncomplete,
    QueryViolation,
};

enum class Severity { Info = 0, Warning = 1, Error = 2 };

struct Location {
    std::string partial;
    std::string element;

    friend bool operator==(const Location&, const Location&) = default;
};

struct Finding {
    FindingKind kind = FindingKind::InvalidModel;
    Severity severity = Severity::Error;
    Location location;
    std::string message;
    nlohmann::json evidence = nlohmann::json::object();

    // Stable across runs and platforms: FNV-1a over kind and location.
    std::string id() const;
};

std::string_view to_string(FindingKind k);
std::string_view to_string(Severity s);
bool parse_severity(std::string_view text, Severity& out);

// Sorts into the canonical report order (kind, location, message).
void sort_findings(std::vector<Finding>& findings);

nlohmann::json to_json(const Finding& f);

}  // namespace grafcet
