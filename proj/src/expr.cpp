#include "grafcet/expr.hpp"

#include <cctype>
#include <limits>
#include <sstream>

namespace grafcet {

Expr Expr::boolean(bool b)
{
    Expr e;
    e.op = ExprOp::BoolLit;
    e.value = b ? 1 : 0;
    return e;
}

Expr Expr::integer(std::int64_t v)
{
    Expr e;
    e.op = ExprOp::IntLit;
    e.value = v;
    return e;
}

Expr Expr::variable(std::string name)
{
    Expr e;
    e.op = ExprOp::Var;
    e.value = 0;
    e.name = std::move(name);
    return e;
}

Expr Expr::step_var(std::string partial, std::string step)
{
    Expr e;
    e.op = ExprOp::StepVar;
    e.value = 0;
    e.name = std::move(partial);
    e.step = std::move(step);
    return e;
}

Expr Expr::unary(ExprOp op, Expr operand)
{
    Expr e;
    e.op = op;
    e.value = 0;
    e.args.push_back(std::move(operand));
    return e;
}

Expr Expr::binary(ExprOp op, Expr lhs, Expr rhs)
{
    Expr e;
    e.op = op;
    e.value = 0;
    e.args.push_back(std::move(lhs));
    e.args.push_back(std::move(rhs));
    return e;
}

bool is_relational(ExprOp op)
{
    switch (op) {
    case ExprOp::Eq:
    case ExprOp::Ne:
    case ExprOp::Lt:
    case ExprOp::Le:
    case ExprOp::Gt:
    case ExprOp::Ge:
        return true;
    default:
        return false;
    }
}

bool is_arithmetic(ExprOp op)
{
    return op == ExprOp::Add || op == ExprOp::Sub || op == ExprOp::Mul;
}

namespace {

enum class Tok {
    End,
    Ident,
    Int,
    LParen,
    RParen,
    Bang,
    Amp,
    Pipe,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Plus,
    Minus,
    Star,
};

struct Token {
    Tok kind = Tok::End;
    std::string text;
    std::size_t pos = 0;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next()
    {
        while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_])))
            ++i_;
        Token t;
        t.pos = i_;
        if (i_ >= src_.size())
            return t;
        char c = src_[i_];
        auto single = [&](Tok k) {
            t.kind = k;
            t.text = std::string(1, c);
            ++i_;
            return t;
        };
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = i_;
            while (i_ < src_.size() && is_word(src_[i_]))
                ++i_;
            if (i_ + 1 < src_.size() && src_[i_] == '.' && is_word(src_[i_ + 1])) {
                ++i_;
                while (i_ < src_.size() && is_word(src_[i_]))
                    ++i_;
            }
            t.kind = Tok::Ident;
            t.text = std::string(src_.substr(start, i_ - start));
            return t;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = i_;
            while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_])))
                ++i_;
            t.kind = Tok::Int;
            t.text = std::string(src_.substr(start, i_ - start));
            return t;
        }
        switch (c) {
        case '(': return single(Tok::LParen);
        case ')': return single(Tok::RParen);
        case '!': return single(Tok::Bang);
        case '&': return single(Tok::Amp);
        case '|': return single(Tok::Pipe);
        case '=': return single(Tok::Eq);
        case '+': return single(Tok::Plus);
        case '-': return single(Tok::Minus);
        case '*': return single(Tok::Star);
        case '<':
            if (peek(1) == '>') {
                i_ += 2;
                t.kind = Tok::Ne;
                t.text = "<>";
                return t;
            }
            if (peek(1) == '=') {
                i_ += 2;
                t.kind = Tok::Le;
                t.text = "<=";
                return t;
            }
            return single(Tok::Lt);
        case '>':
            if (peek(1) == '=') {
                i_ += 2;
                t.kind = Tok::Ge;
                t.text = ">=";
                return t;
            }
            return single(Tok::Gt);
        default:
            break;
        }
        throw ParseError("unexpected character '" + std::string(1, c) + "'", i_);
    }

private:
    static bool is_word(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
    char peek(std::size_t off) const { return i_ + off < src_.size() ? src_[i_ + off] : '\0'; }

    std::string_view src_;
    std::size_t i_ = 0;
};

class Parser {
public:
    Parser(std::string_view src, const Scope* scope) : lex_(src), scope_(scope)
    {
        cur_ = lex_.next();
        la_ = cur_.kind == Tok::End ? cur_ : lex_.next();
    }

    Expr parse_condition()
    {
        Expr e = parse_or();
        expect_end();
        return e;
    }

    Expr parse_sum_only()
    {
        Expr e = parse_sum();
        expect_end();
        return e;
    }

private:
    void advance()
    {
        cur_ = la_;
        la_ = cur_.kind == Tok::End ? cur_ : lex_.next();
    }

    [[noreturn]] void fail(const std::string& msg, std::size_t pos) const { throw ParseError(msg, pos); }
    [[noreturn]] void reject(const std::string& msg, std::size_t pos) const
    {
        throw ParseError(msg, pos, ParseError::Kind::Semantic);
    }

    void expect(Tok k, const char* what)
    {
        if (cur_.kind != k)
            fail(std::string("expected ") + what + (cur_.kind == Tok::End ? " at end of input" : ", found '" + cur_.text + "'"),
                 cur_.pos);
        advance();
    }

    void expect_end()
    {
        if (cur_.kind != Tok::End)
            fail("unexpected '" + cur_.text + "'", cur_.pos);
    }

    Expr parse_or()
    {
        Expr lhs = parse_and();
        while (cur_.kind == Tok::Pipe) {
            advance();
            lhs = Expr::binary(ExprOp::Or, std::move(lhs), parse_and());
        }
        return lhs;
    }

    Expr parse_and()
    {
        Expr lhs = parse_unary();
        while (cur_.kind == Tok::Amp) {
            advance();
            lhs = Expr::binary(ExprOp::And, std::move(lhs), parse_unary());
        }
        return lhs;
    }

    Expr parse_unary()
    {
        if (cur_.kind == Tok::Bang) {
            advance();
            return Expr::unary(ExprOp::Not, parse_unary());
        }
        return parse_atom();
    }

    static bool is_relop(Tok k)
    {
        return k == Tok::Eq || k == Tok::Ne || k == Tok::Lt || k == Tok::Le || k == Tok::Gt || k == Tok::Ge;
    }

    static ExprOp relop(Tok k)
    {
        switch (k) {
        case Tok::Eq: return ExprOp::Eq;
        case Tok::Ne: return ExprOp::Ne;
        case Tok::Lt: return ExprOp::Lt;
        case Tok::Le: return ExprOp::Le;
        case Tok::Gt: return ExprOp::Gt;
        default: return ExprOp::Ge;
        }
    }

    Expr parse_atom()
    {
        if (cur_.kind == Tok::LParen) {
            advance();
            Expr e = parse_or();
            expect(Tok::RParen, "')'");
            return e;
        }
        if (cur_.kind == Tok::Ident && (cur_.text == "re" || cur_.text == "fe") && la_.kind == Tok::LParen) {
            ExprOp op = cur_.text == "re" ? ExprOp::Rising : ExprOp::Falling;
            advance();
            advance();
            if (cur_.kind != Tok::Ident)
                fail("edge operator expects a Boolean reference", cur_.pos);
            std::size_t pos = cur_.pos;
            Expr ref = resolve(cur_.text, pos);
            advance();
            expect(Tok::RParen, "')'");
            if (scope_ && ref.op == ExprOp::Var && scope_->variable_type(ref.name) != VarType::Bool)
                reject("edge operator applied to integer variable '" + ref.name + "'", pos);
            return Expr::unary(op, std::move(ref));
        }
        if (cur_.kind == Tok::Ident && (cur_.text == "true" || cur_.text == "false")) {
            bool b = cur_.text == "true";
            advance();
            return Expr::boolean(b);
        }
        if (cur_.kind != Tok::Ident && cur_.kind != Tok::Int && cur_.kind != Tok::Minus)
            fail(cur_.kind == Tok::End ? "unexpected end of condition" : "unexpected '" + cur_.text + "'", cur_.pos);

        std::size_t start = cur_.pos;
        Expr lhs = parse_sum();
        if (is_relop(cur_.kind)) {
            ExprOp op = relop(cur_.kind);
            advance();
            Expr rhs = parse_sum();
            return Expr::binary(op, std::move(lhs), std::move(rhs));
        }
        if (lhs.op == ExprOp::Var || lhs.op == ExprOp::StepVar)
            return lhs;
        reject("expected a comparison operator after arithmetic term", start);
    }

    Expr parse_sum()
    {
        Expr lhs = parse_term();
        while (cur_.kind == Tok::Plus || cur_.kind == Tok::Minus) {
            ExprOp op = cur_.kind == Tok::Plus ? ExprOp::Add : ExprOp::Sub;
            advance();
            lhs = Expr::binary(op, std::move(lhs), parse_term());
        }
        return lhs;
    }

    Expr parse_term()
    {
        bool negative = false;
        if (cur_.kind == Tok::Minus) {
            negative = true;
            advance();
            if (cur_.kind != Tok::Int)
                fail("'-' must precede an integer literal", cur_.pos);
        }
        if (cur_.kind == Tok::Int) {
            std::int64_t v = to_int(cur_);
            if (negative)
                v = -v;
            advance();
            if (cur_.kind == Tok::Star) {
                advance();
                if (cur_.kind != Tok::Ident)
                    fail("expected variable after '*'", cur_.pos);
                Expr ref = resolve(cur_.text, cur_.pos);
                advance();
                return Expr::binary(ExprOp::Mul, Expr::integer(v), std::move(ref));
            }
            return Expr::integer(v);
        }
        if (cur_.kind == Tok::Ident) {
            if (cur_.text == "true" || cur_.text == "false" || cur_.text == "re" || cur_.text == "fe")
                fail("'" + cur_.text + "' is not an arithmetic term", cur_.pos);
            Expr ref = resolve(cur_.text, cur_.pos);
            advance();
            return ref;
        }
        fail(cur_.kind == Tok::End ? "unexpected end of expression" : "unexpected '" + cur_.text + "'", cur_.pos);
    }

    std::int64_t to_int(const Token& t) const
    {
        try {
            std::size_t used = 0;
            long long v = std::stoll(t.text, &used);
            return v;
        } catch (const std::exception&) {
            fail("integer literal out of range", t.pos);
        }
    }

    Expr resolve(const std::string& name, std::size_t pos) const
    {
        auto dot = name.find('.');
        if (!scope_) {
            if (name.size() > 1 && name[0] == 'X' && dot != std::string::npos)
                return Expr::step_var(name.substr(1, dot - 1), name.substr(dot + 1));
            if (dot != std::string::npos)
                fail("'.' is only valid in step references", pos);
            return Expr::variable(name);
        }
        if (dot == std::string::npos && scope_->variable_type(name))
            return Expr::variable(name);
        if (name.size() > 1 && name[0] == 'X') {
            if (dot != std::string::npos) {
                std::string partial = name.substr(1, dot - 1);
                std::string step = name.substr(dot + 1);
                if (scope_->has_step(partial, step))
                    return Expr::step_var(partial, step);
                reject("unknown step '" + partial + "." + step + "'", pos);
            }
            std::string step = name.substr(1);
            std::string partial(scope_->current_partial());
            if (!partial.empty() && scope_->has_step(partial, step))
                return Expr::step_var(partial, step);
        }
        reject("unknown identifier '" + name + "'", pos);
    }

    Lexer lex_;
    const Scope* scope_;
    Token cur_;
    Token la_;
};

std::optional<std::string> check(const Expr& e, VarType expected, const Scope& scope)
{
    auto mismatch = [&](const char* what) {
        return std::optional<std::string>(std::string(what) + " used where " +
                                          (expected == VarType::Bool ? "a Boolean" : "an integer") + " is expected");
    };
    switch (e.op) {
    case ExprOp::BoolLit:
        if (expected != VarType::Bool)
            return mismatch("Boolean literal");
        return std::nullopt;
    case ExprOp::IntLit:
        if (expected != VarType::Int)
            return mismatch("integer literal");
        return std::nullopt;
    case ExprOp::Var: {
        auto t = scope.variable_type(e.name);
        if (!t)
            return "unknown variable '" + e.name + "'";
        if (*t != expected)
            return "variable '" + e.name + "' has type " + (*t == VarType::Bool ? "bool" : "int") + ", expected " +
                   (expected == VarType::Bool ? "bool" : "int");
        return std::nullopt;
    }
    case ExprOp::StepVar:
        if (!scope.has_step(e.name, e.step))
            return "unknown step '" + e.name + "." + e.step + "'";
        if (expected != VarType::Bool)
            return mismatch("step variable");
        return std::nullopt;
    case ExprOp::Not:
    case ExprOp::And:
    case ExprOp::Or:
        if (expected != VarType::Bool)
            return mismatch("logical operator");
        for (const auto& a : e.args)
            if (auto err = check(a, VarType::Bool, scope))
                return err;
        return std::nullopt;
    case ExprOp::Rising:
    case ExprOp::Falling:
        if (expected != VarType::Bool)
            return mismatch("edge event");
        if (e.args.size() != 1 || (e.args[0].op != ExprOp::Var && e.args[0].op != ExprOp::StepVar))
            return std::string("edge operator expects a Boolean reference");
        return check(e.args[0], VarType::Bool, scope);
    case ExprOp::Eq:
    case ExprOp::Ne:
    case ExprOp::Lt:
    case ExprOp::Le:
    case ExprOp::Gt:
    case ExprOp::Ge:
        if (expected != VarType::Bool)
            return mismatch("comparison");
        for (const auto& a : e.args)
            if (auto err = check(a, VarType::Int, scope))
                return err;
        return std::nullopt;
    case ExprOp::Add:
    case ExprOp::Sub:
        if (expected != VarType::Int)
            return mismatch("arithmetic");
        for (const auto& a : e.args)
            if (auto err = check(a, VarType::Int, scope))
                return err;
        return std::nullopt;
    case ExprOp::Mul:
        if (expected != VarType::Int)
            return mismatch("arithmetic");
        if (e.args.size() != 2 || e.args[0].op != ExprOp::IntLit)
            return std::string("multiplication requires a constant factor");
        return check(e.args[1], VarType::Int, scope);
    }
    return std::nullopt;
}

int precedence(ExprOp op)
{
    switch (op) {
    case ExprOp::Or: return 1;
    case ExprOp::And: return 2;
    case ExprOp::Not: return 3;
    default: return 4;
    }
}

void print(const Expr& e, std::ostringstream& os);

void print_child(const Expr& child, int parent_prec, bool right, std::ostringstream& os)
{
    int p = precedence(child.op);
    bool parens = p < parent_prec || (right && p == parent_prec && p <= 2);
    if (parens)
        os << '(';
    print(child, os);
    if (parens)
        os << ')';
}

void print(const Expr& e, std::ostringstream& os)
{
    switch (e.op) {
    case ExprOp::BoolLit: os << (e.value ? "true" : "false"); return;
    case ExprOp::IntLit: os << e.value; return;
    case ExprOp::Var: os << e.name; return;
    case ExprOp::StepVar: os << 'X' << e.name << '.' << e.step; return;
    case ExprOp::Not:
        os << '!';
        print_child(e.args[0], 3, false, os);
        return;
    case ExprOp::And:
    case ExprOp::Or: {
        int p = precedence(e.op);
        print_child(e.args[0], p, false, os);
        os << (e.op == ExprOp::And ? " & " : " | ");
        print_child(e.args[1], p, true, os);
        return;
    }
    case ExprOp::Rising:
    case ExprOp::Falling:
        os << (e.op == ExprOp::Rising ? "re(" : "fe(");
        print(e.args[0], os);
        os << ')';
        return;
    case ExprOp::Eq:
    case ExprOp::Ne:
    case ExprOp::Lt:
    case ExprOp::Le:
    case ExprOp::Gt:
    case ExprOp::Ge: {
        static const char* ops[] = {"=", "<>", "<", "<=", ">", ">="};
        print(e.args[0], os);
        os << ' ' << ops[static_cast<int>(e.op) - static_cast<int>(ExprOp::Eq)] << ' ';
        print(e.args[1], os);
        return;
    }
    case ExprOp::Add:
    case ExprOp::Sub:
        print(e.args[0], os);
        os << (e.op == ExprOp::Add ? " + " : " - ");
        print(e.args[1], os);
        return;
    case ExprOp::Mul:
        os << e.args[0].value << '*';
        print(e.args[1], os);
        return;
    }
}

}  // namespace

Expr parse_condition(std::string_view text, const Scope* scope)
{
    Parser p(text, scope);
    Expr e = p.parse_condition();
    if (scope) {
        if (auto err = type_error(e, VarType::Bool, *scope))
            throw ParseError("type error: " + *err, 0, ParseError::Kind::Semantic);
    }
    return e;
}

Expr parse_value(std::string_view text, VarType type, const Scope* scope)
{
    Expr e;
    if (type == VarType::Bool) {
        std::string_view t = text;
        while (!t.empty() && std::isspace(static_cast<unsigned char>(t.front())))
            t.remove_prefix(1);
        while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back())))
            t.remove_suffix(1);
        if (t == "1" || t == "0")
            return Expr::boolean(t == "1");
        Parser p(text, scope);
        e = p.parse_condition();
    } else {
        Parser p(text, scope);
        e = p.parse_sum_only();
    }
    if (scope) {
        if (auto err = type_error(e, type, *scope))
            throw ParseError("type error: " + *err, 0, ParseError::Kind::Semantic);
    }
    return e;
}

std::optional<std::string> type_error(const Expr& e, VarType expected, const Scope& scope)
{
    return check(e, expected, scope);
}

std::string to_string(const Expr& e)
{
    std::ostringstream os;
    print(e, os);
    return os.str();
}

void collect_references(const Expr& e, std::vector<const Expr*>& out)
{
    if (e.op == ExprOp::Var || e.op == ExprOp::StepVar) {
        out.push_back(&e);
        return;
    }
    for (const auto& a : e.args)
        collect_references(a, out);
}

bool mentions_variable(const Expr& e, std::string_view name)
{
    if (e.op == ExprOp::Var)
        return e.name == name;
    for (const auto& a : e.args)
        if (mentions_variable(a, name))
            return true;
    return false;
}

}  // namespace grafcet
