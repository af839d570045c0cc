#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "grafcet/model.hpp"

namespace grafcet {

struct HierarchyEdge {
    enum class Kind { Enclosing, Forcing };

    Kind kind = Kind::Enclosing;
    std::string from;  // host partial
    std::string step;  // enclosing / forcing step in `from`
    std::string to;    // inferior partial
    ForcedSituation situation;  // forcing edges only
    std::string action;         // forcing edges only
};

// Hierarchical dependencies between partial Grafcets. `order` lists the
// partials hosts-first when the graph is acyclic; otherwise `cycle` holds a
// closed walk (first == last) and `order` falls back to declaration order.
struct HierarchyGraph {
    std::vector<std::string> nodes;
    std::vector<HierarchyEdge> edges;
    std::vector<std::string> order;
    std::vector<std::string> cycle;

    bool acyclic() const { return cycle.empty(); }
    std::vector<const HierarchyEdge*> incoming(std::string_view partial) const;
    std::vector<const HierarchyEdge*> outgoing(std::string_view partial) const;
};

HierarchyGraph build_hierarchy(const GrafcetSpec& spec);

struct SituationSource {
    enum class Kind { InitialSteps, Enclosing, Forcing, SourceTransitions };

    Kind kind = Kind::InitialSteps;
    std::string partial;  // host partial for Enclosing / Forcing
    std::string step;     // host step for Enclosing / Forcing
    bool forced_init = false;

    friend bool operator==(const SituationSource&, const SituationSource&) = default;
};

struct InitialSituation {
    std::string partial;
    SituationSource source;
    std::vector<std::string> steps;

    std::string describe() const;
    friend bool operator==(const InitialSituation&, const InitialSituation&) = default;
};

// One entry per activation source of `partial`: its initial steps, every
// incoming enclosing, every incoming forcing to an explicit step set or to
// `init`. Forcing to `*` adds nothing. A partial reachable only through its
// source transitions gets a single situation with no active steps.
std::vector<InitialSituation> initial_situations(const GrafcetSpec& spec, const HierarchyGraph& graph,
                                                 std::string_view partial);

// Cycle finding (if any) and a dead-partial warning for every partial
// Grafcet without an initial situation.
std::vector<Finding> hierarchy_findings(const GrafcetSpec& spec, const HierarchyGraph& graph);

}  // namespace grafcet
