#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "grafcet/model.hpp"

namespace grafcet {

// Explicit-state interpreter for small specifications. It never shares code
// with the static analyses and serves as their test oracle.
struct OracleOptions {
    enum class Mode {
        Structural,  // conditions havocked: any transition may fire, any action may run or not
        Semantic,    // conditions evaluated, inputs free, edges from one-step history
    };

    Mode mode = Mode::Structural;
    // Besides single firings, fire every maximal set of enabled transitions
    // without a shared upstream step as one evolution.
    bool simultaneous = true;
    std::size_t multiplicity_cap = 3;  // tokens beyond the cap are dropped
    std::size_t state_cap = 100000;
    std::int64_t value_window = 64;  // |value| above this makes the run incomplete
    // Replaces the initial steps of a partial Grafcet.
    std::map<std::string, std::vector<std::string>> initial_override;
};

struct OracleFacts {
    bool complete = true;
    std::string incomplete_reason;
    bool saturated = false;  // some token was dropped at the multiplicity cap
    std::size_t states = 0;

    // Global names "partial.step" / "partial.action".
    std::set<std::string> reachable_steps;
    std::set<std::pair<std::string, std::string>> concurrent_pairs;  // first < second
    std::map<std::string, std::set<std::int64_t>> values;            // internal and output variables
    std::set<std::pair<std::string, std::string>> write_conflicts;   // stored writers active together
    std::map<std::string, std::optional<std::uint64_t>> max_executions;   // stored actions; nullopt = unbounded
    std::map<std::string, std::optional<std::uint64_t>> max_activations;  // steps; nullopt = unbounded
    std::set<std::string> satisfiable_conditions;                   // transitions and actions

    bool concurrent(const std::string& a, const std::string& b) const;
};

OracleFacts explore(const GrafcetSpec& spec, const OracleOptions& opts = {});

}  // namespace grafcet
