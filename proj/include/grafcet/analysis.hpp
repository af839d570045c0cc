#pragma once

#include <vector>

#include "grafcet/invariants.hpp"
#include "grafcet/reachconc.hpp"

namespace grafcet {

// Everything computed for one partial Grafcet before variables are
// approximated.
struct PartialAnalysis {
    explicit PartialAnalysis(const PartialGrafcet& p) : net(p) {}

    PartialNet net;
    InvariantSet invariants;
    std::vector<ReachConcResult> situations;
    PartialReach merged;
};

}  // namespace grafcet
