#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "grafcet/net.hpp"

namespace grafcet {

using Integer = boost::multiprecision::cpp_int;
using IntVector = std::vector<Integer>;

// |S| x |T| incidence matrix of one partial Grafcet, hierarchy ignored.
// A step both consumed and produced by a transition nets to 0.
struct IncidenceMatrix {
    std::vector<std::string> steps;
    std::vector<std::string> transitions;
    std::vector<std::vector<int>> entries;  // entries[step][transition]

    std::size_t rows() const { return entries.size(); }
    std::size_t cols() const { return transitions.size(); }
    int at(std::size_t s, std::size_t t) const { return entries[s][t]; }
};

IncidenceMatrix incidence(const PartialNet& net);

struct InvariantOptions {
    std::size_t max_rows = 10000;
};

struct SemiflowResult {
    std::vector<IntVector> vectors;  // minimal support, gcd 1, lexicographic by support
    bool complete = true;            // false when the row cap was exceeded
};

// Minimal-support non-negative integer solutions y of y^T A = 0, where A
// has one row per unknown. Farkas elimination with support pruning.
SemiflowResult minimal_semiflows(const std::vector<std::vector<int>>& a, std::size_t unknowns,
                                 const InvariantOptions& opts = {});

// y^T N = 0
SemiflowResult s_invariants(const IncidenceMatrix& n, const InvariantOptions& opts = {});
// N x = 0
SemiflowResult t_invariants(const IncidenceMatrix& n, const InvariantOptions& opts = {});

struct Boundedness {
    bool covered = false;
    std::optional<Integer> bound;                    // n; nullopt means unbounded
    std::vector<std::optional<Integer>> step_bound;  // max entry for each step over all S-invariants
    std::vector<std::size_t> uncovered;
};

// covered iff every step has a positive entry in some S-invariant; n is the
// largest entry over all minimal S-invariants.
Boundedness classify_boundedness(const SemiflowResult& s_inv, std::size_t step_count);

struct InvariantSet {
    IncidenceMatrix matrix;
    SemiflowResult s;
    SemiflowResult t;
    Boundedness boundedness;

    bool complete() const { return s.complete && t.complete; }
    // Transitions with a positive entry in some T-invariant.
    std::vector<bool> transitions_on_loops() const;
};

InvariantSet compute_invariants(const PartialNet& net, const InvariantOptions& opts = {});

bool verifies_s_invariant(const IncidenceMatrix& n, const IntVector& y);
bool verifies_t_invariant(const IncidenceMatrix& n, const IntVector& x);

}  // namespace grafcet
