#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace grafcet {

enum class VarType { Bool, Int };

enum class ExprOp {
    BoolLit,
    IntLit,
    Var,
    StepVar,
    Not,
    And,
    Or,
    Rising,
    Falling,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Add,
    Sub,
    Mul,  // args = {IntLit factor, reference}
};

// Condition / value expression tree. Leaves carry either a literal in
// `value`, a variable name in `name`, or a step reference (`name` = partial
// id, `step` = step id).
struct Expr {
    ExprOp op = ExprOp::BoolLit;
    std::int64_t value = 1;
    std::string name;
    std::string step;
    std::vector<Expr> args;

    static Expr boolean(bool b);
    static Expr integer(std::int64_t v);
    static Expr variable(std::string name);
    static Expr step_var(std::string partial, std::string step);
    static Expr unary(ExprOp op, Expr operand);
    static Expr binary(ExprOp op, Expr lhs, Expr rhs);

    bool is_true_literal() const { return op == ExprOp::BoolLit && value != 0; }

    friend bool operator==(const Expr&, const Expr&) = default;
};

bool is_relational(ExprOp op);
bool is_arithmetic(ExprOp op);

// Name resolution and typing context used while parsing conditions.
class Scope {
public:
    virtual ~Scope() = default;
    virtual std::optional<VarType> variable_type(std::string_view name) const = 0;
    virtual bool has_step(std::string_view partial, std::string_view step) const = 0;
    // Partial Grafcet used to resolve the short step form `X<step>`.
    virtual std::string_view current_partial() const = 0;
};

class ParseError : public std::runtime_error {
public:
    // Syntax: malformed text. Semantic: well-formed but naming something
    // unknown or mixing types.
    enum class Kind { Syntax, Semantic };

    ParseError(std::string message, std::size_t position, Kind kind = Kind::Syntax)
        : std::runtime_error(std::move(message)), position_(position), kind_(kind) {}
    std::size_t position() const { return position_; }
    Kind kind() const { return kind_; }

private:
    std::size_t position_;
    Kind kind_;
};

// Parses a Boolean condition. With a scope, identifiers are resolved to
// variables or step variables and the tree is type checked; without one,
// dotted `X<partial>.<step>` names become step references and everything
// else a variable reference.
Expr parse_condition(std::string_view text, const Scope* scope = nullptr);

// Parses the right-hand side of a stored action for a target of `type`.
Expr parse_value(std::string_view text, VarType type, const Scope* scope = nullptr);

// Returns a description of the first type error, if any. `expected` is the
// type the whole expression must have.
std::optional<std::string> type_error(const Expr& e, VarType expected, const Scope& scope);

std::string to_string(const Expr& e);

// Collects every Var / StepVar leaf in evaluation order.
void collect_references(const Expr& e, std::vector<const Expr*>& out);
bool mentions_variable(const Expr& e, std::string_view name);

}  // namespace grafcet
