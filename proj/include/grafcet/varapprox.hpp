#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "grafcet/analysis.hpp"
#include "grafcet/hierarchy.hpp"

namespace grafcet {

// Non-negative count that may be infinite; arithmetic saturates to infinity.
class Count {
public:
    Count() = default;
    static Count finite(std::uint64_t v) { return Count(false, v); }
    static Count infinite() { return Count(true, 0); }

    bool is_infinite() const { return inf_; }
    std::uint64_t value() const { return value_; }

    friend Count operator+(Count a, Count b);
    friend Count operator*(Count a, Count b);
    friend bool operator==(const Count&, const Count&) = default;
    friend bool operator<(Count a, Count b);

    std::string str() const;

private:
    Count(bool inf, std::uint64_t v) : inf_(inf), value_(v) {}
    bool inf_ = false;
    std::uint64_t value_ = 0;
};

struct ExecutionBound {
    std::string partial;
    std::string action;
    std::string step;
    Count count;
    std::vector<std::string> reasons;
};

struct ExecutionBounds {
    // step_activations[p][s]: how often step s of partial p can be activated.
    std::vector<std::vector<Count>> step_activations;
    std::vector<std::vector<std::vector<std::string>>> step_reasons;
    // One entry per stored action, in declaration order.
    std::vector<ExecutionBound> actions;

    const ExecutionBound* find(std::string_view partial, std::string_view action) const;
};

// Activation bound of a step: 0 when unreachable; infinite when the step is
// not covered by S-invariants, the invariants are incomplete, or some
// transition entering it lies on a T-invariant; otherwise the sum over the
// situations reaching it of (entries into that situation) * n * |S^I|.
// Stored actions inherit the bound of their step.
ExecutionBounds bound_executions(const GrafcetSpec& spec, const HierarchyGraph& graph,
                                 const std::vector<PartialAnalysis>& partials);

// Integer endpoints; nullopt is the matching infinity.
struct Interval {
    std::optional<std::int64_t> lo;
    std::optional<std::int64_t> hi;

    static Interval point(std::int64_t v) { return {v, v}; }
    static Interval top() { return {}; }
    bool contains(std::int64_t v) const { return (!lo || *lo <= v) && (!hi || v <= *hi); }
    bool singleton() const { return lo && hi && *lo == *hi; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

struct BoolSet {
    bool can_false = false;
    bool can_true = false;

    static BoolSet both() { return {true, true}; }
    static BoolSet only(bool v) { return {!v, v}; }
    bool contains(bool v) const { return v ? can_true : can_false; }
    bool singleton() const { return can_false != can_true; }
    friend bool operator==(const BoolSet&, const BoolSet&) = default;
};

struct VarApprox {
    std::string name;
    VarKind kind = VarKind::Internal;
    VarType type = VarType::Int;
    Interval range;  // Int
    BoolSet values;  // Bool
    std::vector<std::string> writers;

    bool contains(std::int64_t v) const { return type == VarType::Int ? range.contains(v) : values.contains(v != 0); }
};

// How a stored action changes an integer variable.
struct WriterEffect {
    enum class Kind { Constant, Shift, Opaque };
    Kind kind = Kind::Opaque;
    std::int64_t amount = 0;  // the constant, or the shift
};

WriterEffect classify_writer(const StoredAction& a);

// Hull of one integer variable from its writers' effects and counts.
Interval hull_writes(std::int64_t init, const std::vector<std::pair<WriterEffect, Count>>& writers);

// One entry per declared variable, in declaration order. Inputs are
// unconstrained.
std::vector<VarApprox> approximate_variables(const GrafcetSpec& spec, const ExecutionBounds& bounds,
                                             const std::vector<PartialAnalysis>& partials);

std::string to_string(const Interval& i);
std::string to_string(const BoolSet& b);

}  // namespace grafcet
