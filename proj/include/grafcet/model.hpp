#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "grafcet/expr.hpp"
#include "grafcet/finding.hpp"

namespace grafcet {

enum class VarKind { Input, Internal, Output };

struct VariableDecl {
    std::string name;
    VarKind kind = VarKind::Internal;
    VarType type = VarType::Bool;
    std::optional<std::int64_t> init;  // absent for inputs; defaults to 0 otherwise

    std::int64_t initial_value() const { return init.value_or(0); }

    friend bool operator==(const VariableDecl&, const VariableDecl&) = default;
};

struct Step {
    std::string id;
    bool initial = false;
    bool marked = false;

    friend bool operator==(const Step&, const Step&) = default;
};

struct Enclosing {
    std::string step;
    std::string target;

    friend bool operator==(const Enclosing&, const Enclosing&) = default;
};

struct Transition {
    std::string id;
    std::vector<std::string> upstream;
    std::vector<std::string> downstream;
    Expr condition = Expr::boolean(true);

    friend bool operator==(const Transition&, const Transition&) = default;
};

enum class Trigger { Activation, Deactivation, During };

struct ContinuousAction {
    std::string id;
    std::string step;
    std::string var;
    Expr condition = Expr::boolean(true);

    friend bool operator==(const ContinuousAction&, const ContinuousAction&) = default;
};

struct StoredAction {
    std::string id;
    std::string step;
    std::string var;
    Expr value;
    Trigger trigger = Trigger::Activation;
    Expr condition = Expr::boolean(true);

    friend bool operator==(const StoredAction&, const StoredAction&) = default;
};

struct ForcedSituation {
    enum class Kind { Steps, Current, Init };
    Kind kind = Kind::Steps;
    std::vector<std::string> steps;  // only for Kind::Steps

    friend bool operator==(const ForcedSituation&, const ForcedSituation&) = default;
};

struct ForcingAction {
    std::string id;
    std::string step;
    std::string target;
    ForcedSituation situation;

    friend bool operator==(const ForcingAction&, const ForcingAction&) = default;
};

using Action = std::variant<ContinuousAction, StoredAction, ForcingAction>;

const std::string& action_id(const Action& a);
const std::string& action_step(const Action& a);

struct PartialGrafcet {
    std::string id;
    std::vector<Step> steps;
    std::vector<Enclosing> enclosings;
    std::vector<Transition> transitions;
    std::vector<Action> actions;

    std::optional<std::size_t> step_index(std::string_view step) const;
    const Step* find_step(std::string_view step) const;
    bool enclosed() const;

    friend bool operator==(const PartialGrafcet&, const PartialGrafcet&) = default;
};

struct SafetyQuery {
    enum class Kind { NeverConcurrent, NeverCoactive };
    struct Literal {
        std::string var;
        std::int64_t value = 1;
        friend bool operator==(const Literal&, const Literal&) = default;
    };

    std::string name;
    Kind kind = Kind::NeverConcurrent;
    std::string step_a;  // "partial.step"
    std::string step_b;
    Literal lit_a;
    Literal lit_b;

    friend bool operator==(const SafetyQuery&, const SafetyQuery&) = default;
};

struct GrafcetSpec {
    std::string name;
    std::vector<VariableDecl> variables;
    std::vector<PartialGrafcet> partials;
    std::vector<SafetyQuery> queries;

    const VariableDecl* variable(std::string_view name) const;
    const PartialGrafcet* partial(std::string_view id) const;
    std::optional<std::size_t> partial_index(std::string_view id) const;

    friend bool operator==(const GrafcetSpec&, const GrafcetSpec&) = default;
};

// Name resolution against a whole specification; the short `X<step>` form
// resolves inside `current`.
class SpecScope : public Scope {
public:
    SpecScope(const GrafcetSpec& spec, std::string current = {}) : spec_(spec), current_(std::move(current)) {}

    std::optional<VarType> variable_type(std::string_view name) const override;
    bool has_step(std::string_view partial, std::string_view step) const override;
    std::string_view current_partial() const override { return current_; }

private:
    const GrafcetSpec& spec_;
    std::string current_;
};

// "partial.step"
std::string global_step_name(std::string_view partial, std::string_view step);
// Splits "partial.step"; nullopt when there is no dot.
std::optional<std::pair<std::string, std::string>> split_global_step(std::string_view name);

// Every well-formedness violation, as error findings in canonical order.
std::vector<Finding> validate(const GrafcetSpec& spec);

std::string_view to_string(VarKind k);
std::string_view to_string(VarType t);
std::string_view to_string(Trigger t);

}  // namespace grafcet
