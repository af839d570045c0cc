#include "grafcet/checks.hpp"

#include <algorithm>
#include <limits>
#include <set>

namespace grafcet {

std::string_view to_string(Truth t)
{
    switch (t) {
    case Truth::False: return "false";
    case Truth::True: return "true";
    case Truth::Unknown: return "unknown";
    }
    return "unknown";
}

AbstractEnv::AbstractEnv(const GrafcetSpec& spec, const std::vector<VarApprox>& vars,
                         const std::vector<PartialAnalysis>& partials)
    : spec_(spec), vars_(vars), partials_(partials)
{
}

const VarApprox* AbstractEnv::variable(std::string_view name) const
{
    for (const auto& v : vars_)
        if (v.name == name)
            return &v;
    return nullptr;
}

bool AbstractEnv::step_reachable(std::string_view partial, std::string_view step) const
{
    auto p = spec_.partial_index(partial);
    if (!p || *p >= partials_.size())
        return false;
    auto s = partials_[*p].net.step_index(step);
    return s && partials_[*p].merged.reachable.test(*s);
}

namespace {

using Bound = std::optional<std::int64_t>;

Bound narrow(__int128 v)
{
    if (v < std::numeric_limits<std::int64_t>::min() || v > std::numeric_limits<std::int64_t>::max())
        return std::nullopt;
    return static_cast<std::int64_t>(v);
}

Interval add(const Interval& a, const Interval& b, int sign)
{
    // a + sign*b
    Bound blo = sign > 0 ? b.lo : (b.hi ? Bound(-*b.hi) : std::nullopt);
    Bound bhi = sign > 0 ? b.hi : (b.lo ? Bound(-*b.lo) : std::nullopt);
    Interval r;
    if (a.lo && blo)
        r.lo = narrow(static_cast<__int128>(*a.lo) + *blo);
    if (a.hi && bhi)
        r.hi = narrow(static_cast<__int128>(*a.hi) + *bhi);
    return r;
}

Interval scale(std::int64_t k, const Interval& a)
{
    if (k == 0)
        return Interval::point(0);
    Interval r;
    if (a.lo)
        r.lo = narrow(static_cast<__int128>(*a.lo) * k);
    if (a.hi)
        r.hi = narrow(static_cast<__int128>(*a.hi) * k);
    if (k < 0)
        std::swap(r.lo, r.hi);
    return r;
}

// Some x in a, y in b with x < y (or x <= y when `strict` is false).
bool possibly_less(const Interval& a, const Interval& b, bool strict)
{
    if (!a.lo || !b.hi)
        return true;
    return strict ? *a.lo < *b.hi : *a.lo <= *b.hi;
}

BoolSet compare(ExprOp op, const Interval& a, const Interval& b)
{
    switch (op) {
    case ExprOp::Lt: return {possibly_less(b, a, false), possibly_less(a, b, true)};
    case ExprOp::Le: return {possibly_less(b, a, true), possibly_less(a, b, false)};
    case ExprOp::Gt: return {possibly_less(a, b, false), possibly_less(b, a, true)};
    case ExprOp::Ge: return {possibly_less(a, b, true), possibly_less(b, a, false)};
    case ExprOp::Eq:
    case ExprOp::Ne: {
        bool meet = possibly_less(a, b, false) && possibly_less(b, a, false);
        bool always_equal = a.singleton() && b.singleton() && *a.lo == *b.lo;
        BoolSet eq{!always_equal, meet};
        return op == ExprOp::Eq ? eq : BoolSet{eq.can_true, eq.can_false};
    }
    default: return BoolSet::both();
    }
}

}  // namespace

AbstractEnv::Value AbstractEnv::eval(const Expr& e) const
{
    Value r;
    switch (e.op) {
    case ExprOp::BoolLit: r.b = BoolSet::only(e.value != 0); break;
    case ExprOp::IntLit: r.i = Interval::point(e.value); break;
    case ExprOp::Var:
        if (const auto* v = variable(e.name)) {
            r.b = v->type == VarType::Bool ? v->values : BoolSet::both();
            r.i = v->type == VarType::Int ? v->range : Interval{0, 1};
        } else {
            r.b = BoolSet::both();
        }
        break;
    case ExprOp::StepVar: r.b = step_reachable(e.name, e.step) ? BoolSet::both() : BoolSet::only(false); break;
    case ExprOp::Not: {
        auto a = eval(e.args[0]).b;
        r.b = {a.can_true, a.can_false};
        break;
    }
    case ExprOp::And:
    case ExprOp::Or: {
        auto a = eval(e.args[0]).b;
        auto b = eval(e.args[1]).b;
        if (e.op == ExprOp::And)
            r.b = {a.can_false || b.can_false, a.can_true && b.can_true};
        else
            r.b = {a.can_false && b.can_false, a.can_true || b.can_true};
        break;
    }
    case ExprOp::Rising:
    case ExprOp::Falling: r.b = eval(e.args[0]).b.singleton() ? BoolSet::only(false) : BoolSet::both(); break;
    case ExprOp::Eq:
    case ExprOp::Ne:
    case ExprOp::Lt:
    case ExprOp::Le:
    case ExprOp::Gt:
    case ExprOp::Ge: r.b = compare(e.op, eval(e.args[0]).i, eval(e.args[1]).i); break;
    case ExprOp::Add: r.i = add(eval(e.args[0]).i, eval(e.args[1]).i, 1); break;
    case ExprOp::Sub: r.i = add(eval(e.args[0]).i, eval(e.args[1]).i, -1); break;
    case ExprOp::Mul: {
        auto a = eval(e.args[0]).i;
        auto b = eval(e.args[1]).i;
        if (a.singleton())
            r.i = scale(*a.lo, b);
        else if (b.singleton())
            r.i = scale(*b.lo, a);
        else
            r.i = Interval::top();
        break;
    }
    }
    return r;
}

Truth AbstractEnv::truth(const Expr& condition) const
{
    auto b = eval(condition).b;
    if (b.can_true && b.can_false)
        return Truth::Unknown;
    return b.can_true ? Truth::True : Truth::False;
}

namespace {

struct Writer {
    std::size_t partial;
    const PartialGrafcet* part;
    const Action* action;
    std::string step;
    std::optional<std::size_t> global;
};

std::string global_action(const PartialGrafcet& p, const Action& a)
{
    return global_step_name(p.id, action_id(a));
}

Finding race(const Writer& a, const Writer& b, const std::string& var, const std::string& why)
{
    Finding f;
    f.kind = FindingKind::Race;
    f.severity = Severity::Error;
    f.location = {a.part->id, action_id(*a.action)};
    auto ga = global_action(*a.part, *a.action);
    auto gb = global_action(*b.part, *b.action);
    f.message = "stored actions " + ga + " and " + gb + " both write '" + var + "' " + why;
    f.evidence = {{"variable", var},
                  {"actions", {ga, gb}},
                  {"steps", {global_step_name(a.part->id, a.step), global_step_name(b.part->id, b.step)}}};
    return f;
}

bool same_or_concurrent(const Writer& a, const Writer& b, const GlobalConcurrency& conc)
{
    if (!a.global || !b.global)
        return false;
    return *a.global == *b.global || conc.concurrent(*a.global, *b.global);
}

}  // namespace

std::vector<Finding> detect_races(const GrafcetSpec& spec, const GlobalConcurrency& conc)
{
    std::vector<Writer> stored, continuous;
    for (std::size_t p = 0; p < spec.partials.size(); ++p) {
        const auto& part = spec.partials[p];
        for (const auto& a : part.actions) {
            Writer w{p, &part, &a, action_step(a), conc.index(part.id, action_step(a))};
            if (std::holds_alternative<StoredAction>(a))
                stored.push_back(w);
            else if (std::holds_alternative<ContinuousAction>(a))
                continuous.push_back(w);
        }
    }
    auto var_of = [](const Writer& w) -> const std::string& {
        if (const auto* s = std::get_if<StoredAction>(w.action))
            return s->var;
        return std::get<ContinuousAction>(*w.action).var;
    };

    std::vector<Finding> out;
    std::set<std::pair<const Action*, const Action*>> reported;
    for (std::size_t i = 0; i < stored.size(); ++i) {
        for (std::size_t j = i + 1; j < stored.size(); ++j) {
            const auto& a = stored[i];
            const auto& b = stored[j];
            if (var_of(a) != var_of(b) || !same_or_concurrent(a, b, conc))
                continue;
            reported.insert({a.action, b.action});
            out.push_back(race(a, b, var_of(a), a.global == b.global ? "on the same step" : "on concurrent steps"));
        }
    }

    // Deactivation of an upstream step and activation of a downstream step
    // of one transition happen in the same evolution.
    for (std::size_t i = 0; i < stored.size(); ++i) {
        for (std::size_t j = 0; j < stored.size(); ++j) {
            const auto& a = stored[i];
            const auto& b = stored[j];
            if (i == j || a.partial != b.partial || var_of(a) != var_of(b))
                continue;
            if (std::get<StoredAction>(*a.action).trigger != Trigger::Deactivation ||
                std::get<StoredAction>(*b.action).trigger == Trigger::Deactivation)
                continue;
            auto key = i < j ? std::pair(a.action, b.action) : std::pair(b.action, a.action);
            if (reported.count(key))
                continue;
            for (const auto& t : a.part->transitions) {
                bool up = std::find(t.upstream.begin(), t.upstream.end(), a.step) != t.upstream.end();
                bool down = std::find(t.downstream.begin(), t.downstream.end(), b.step) != t.downstream.end();
                if (up && down) {
                    reported.insert(key);
                    out.push_back(race(a, b, var_of(a), "when " + global_step_name(a.part->id, t.id) + " fires"));
                    break;
                }
            }
        }
    }

    for (const auto& c : continuous) {
        for (const auto& s : stored) {
            const auto& sa = std::get<StoredAction>(*s.action);
            if (var_of(c) == sa.var) {
                Finding f;
                f.kind = FindingKind::Race;
                f.severity = Severity::Error;
                f.location = {s.part->id, sa.id};
                f.message = "output '" + sa.var + "' is written by continuous action " + global_action(*c.part, *c.action) +
                            " and stored action " + global_action(*s.part, *s.action);
                f.evidence = {{"variable", sa.var},
                              {"actions", {global_action(*c.part, *c.action), global_action(*s.part, *s.action)}}};
                out.push_back(std::move(f));
            } else if (mentions_variable(sa.value, var_of(c)) && same_or_concurrent(c, s, conc)) {
                Finding f;
                f.kind = FindingKind::Race;
                f.severity = Severity::Info;
                f.location = {s.part->id, sa.id};
                f.message = "stored action " + global_action(*s.part, *s.action) + " reads '" + var_of(c) +
                            "' while continuous action " + global_action(*c.part, *c.action) + " may be driving it";
                f.evidence = {{"variable", var_of(c)},
                              {"actions", {global_action(*c.part, *c.action), global_action(*s.part, *s.action)}},
                              {"steps", {global_step_name(c.part->id, c.step), global_step_name(s.part->id, s.step)}}};
                out.push_back(std::move(f));
            }
        }
    }
    return out;
}

namespace {

nlohmann::json reference_values(const Expr& e, const AbstractEnv& env)
{
    std::vector<const Expr*> refs;
    collect_references(e, refs);
    nlohmann::json out = nlohmann::json::object();
    for (const auto* r : refs) {
        if (r->op == ExprOp::StepVar) {
            out["X" + global_step_name(r->name, r->step)] = env.step_reachable(r->name, r->step) ? "reachable" : "unreachable";
        } else if (const auto* v = env.variable(r->name)) {
            out[r->name] = v->type == VarType::Int ? to_string(v->range) : to_string(v->values);
        }
    }
    return out;
}

void check_one(const std::string& partial, const std::string& element, const char* what, const Expr& cond,
               const AbstractEnv& env, std::vector<Finding>& out)
{
    Truth t = env.truth(cond);
    if (t == Truth::Unknown)
        return;
    std::vector<const Expr*> refs;
    collect_references(cond, refs);
    Finding f;
    f.location = {partial, element};
    f.evidence = {{"condition", to_string(cond)}, {"values", reference_values(cond, env)}};
    if (t == Truth::False) {
        f.kind = FindingKind::UnsatCondition;
        f.severity = Severity::Error;
        f.message = std::string("condition of ") + what + " " + global_step_name(partial, element) +
                    " can never hold: " + to_string(cond);
    } else {
        if (!refs.empty() || cond.is_true_literal())
            return;
        f.kind = FindingKind::AlwaysTrueCondition;
        f.severity = Severity::Info;
        f.message = std::string("condition of ") + what + " " + global_step_name(partial, element) +
                    " is constantly true: " + to_string(cond);
    }
    out.push_back(std::move(f));
}

}  // namespace

std::vector<Finding> check_conditions(const GrafcetSpec& spec, const AbstractEnv& env)
{
    std::vector<Finding> out;
    for (const auto& p : spec.partials) {
        for (const auto& t : p.transitions)
            check_one(p.id, t.id, "transition", t.condition, env, out);
        for (const auto& a : p.actions) {
            if (const auto* c = std::get_if<ContinuousAction>(&a))
                check_one(p.id, c->id, "action", c->condition, env, out);
            else if (const auto* s = std::get_if<StoredAction>(&a))
                check_one(p.id, s->id, "action", s->condition, env, out);
        }
    }
    return out;
}

std::vector<Finding> structural_findings(const GrafcetSpec& spec, const HierarchyGraph& graph,
                                         const std::vector<PartialAnalysis>& partials)
{
    std::vector<Finding> out;
    for (std::size_t p = 0; p < spec.partials.size(); ++p) {
        const auto& part = spec.partials[p];
        const auto& pa = partials[p];
        if (initial_situations(spec, graph, part.id).empty())
            continue;  // reported as a dead partial
        if (!pa.invariants.complete()) {
            Finding f;
            f.kind = FindingKind::AnalysisIncomplete;
            f.severity = Severity::Warning;
            f.location = {part.id, {}};
            f.message = "invariant computation for '" + part.id + "' exceeded its row limit; bounds treated as infinite";
            out.push_back(std::move(f));
        }
        for (std::size_t s = 0; s < pa.net.step_count(); ++s) {
            const auto& id = pa.net.step_id(s);
            if (!pa.merged.reachable.test(s)) {
                Finding f;
                f.kind = FindingKind::UnreachableStep;
                f.severity = Severity::Warning;
                f.location = {part.id, id};
                f.message = "step " + global_step_name(part.id, id) + " is unreachable from every initial situation";
                out.push_back(std::move(f));
            } else if (pa.invariants.complete() && !pa.invariants.boundedness.step_bound[s]) {
                Finding f;
                f.kind = FindingKind::UnboundedActivation;
                f.severity = Severity::Warning;
                f.location = {part.id, id};
                f.message = "step " + global_step_name(part.id, id) +
                            " is not covered by any S-invariant; its activation count is unbounded";
                std::vector<std::string> uncovered;
                for (auto u : pa.invariants.boundedness.uncovered)
                    uncovered.push_back(pa.net.step_id(u));
                f.evidence = {{"uncovered", uncovered}, {"s_invariants", pa.invariants.s.vectors.size()}};
                out.push_back(std::move(f));
            }
        }
    }
    return out;
}

namespace {

// Where a literal can hold: anywhere, nowhere, or only while one of `steps`
// is active.
struct Support {
    bool anywhere = false;
    std::vector<std::size_t> steps;
    bool possible() const { return anywhere || !steps.empty(); }
};

Support literal_support(const GrafcetSpec& spec, const SafetyQuery::Literal& lit, const VarApprox& v,
                        const GlobalConcurrency& conc, const AbstractEnv& env)
{
    Support s;
    bool continuous = false;
    for (const auto& p : spec.partials)
        for (const auto& a : p.actions)
            if (const auto* c = std::get_if<ContinuousAction>(&a); c && c->var == lit.var)
                continuous = true;
    if (!continuous || v.type != VarType::Bool || lit.value == 0) {
        s.anywhere = v.contains(lit.value);
        return s;
    }
    for (const auto& p : spec.partials) {
        for (const auto& a : p.actions) {
            const auto* c = std::get_if<ContinuousAction>(&a);
            if (!c || c->var != lit.var)
                continue;
            if (!env.step_reachable(p.id, c->step) || env.truth(c->condition) == Truth::False)
                continue;
            if (auto g = conc.index(p.id, c->step))
                s.steps.push_back(*g);
        }
    }
    return s;
}

std::string literal_text(const SafetyQuery::Literal& l, const VarApprox& v)
{
    if (v.type == VarType::Bool)
        return l.var + "=" + (l.value ? "true" : "false");
    return l.var + "=" + std::to_string(l.value);
}

Finding query_error(const SafetyQuery& q, const std::string& what)
{
    Finding f;
    f.kind = FindingKind::InvalidModel;
    f.severity = Severity::Error;
    f.location = {{}, q.name};
    f.message = "query '" + q.name + "' references unknown " + what;
    return f;
}

}  // namespace

std::vector<Finding> run_queries(const GrafcetSpec& spec, const std::vector<SafetyQuery>& queries,
                                 const GlobalConcurrency& conc,
                                 const AbstractEnv& env, const QueryOptions& opts)
{
    std::vector<Finding> out;
    for (const auto& q : queries) {
        Finding f;
        f.kind = FindingKind::QueryViolation;
        f.severity = Severity::Error;
        f.location = {{}, q.name};

        if (q.kind == SafetyQuery::Kind::NeverConcurrent) {
            auto a = conc.index(q.step_a);
            auto b = conc.index(q.step_b);
            if (!a || !b) {
                out.push_back(query_error(q, "step " + (!a ? q.step_a : q.step_b)));
                continue;
            }
            if (!conc.concurrent(*a, *b))
                continue;
            f.message = "query '" + q.name + "' violated: " + q.step_a + " and " + q.step_b + " may be active together";
            f.evidence = {{"kind", "never-concurrent"}, {"pair", {q.step_a, q.step_b}}};
            out.push_back(std::move(f));
            continue;
        }

        const VarApprox* va = env.variable(q.lit_a.var);
        const VarApprox* vb = env.variable(q.lit_b.var);
        if (!va || !vb) {
            out.push_back(query_error(q, "variable " + (!va ? q.lit_a.var : q.lit_b.var)));
            continue;
        }
        const std::string ta = literal_text(q.lit_a, *va);
        const std::string tb = literal_text(q.lit_b, *vb);
        if (q.lit_a.var == q.lit_b.var && q.lit_a.value != q.lit_b.value)
            continue;

        if (opts.naive) {
            if (!va->contains(q.lit_a.value) || !vb->contains(q.lit_b.value))
                continue;
            f.message = "query '" + q.name + "' violated: " + ta + " and " + tb + " are both possible (value sets)";
            f.evidence = {{"kind", "never-coactive"},
                          {"mode", "naive"},
                          {"values", {{va->name, va->type == VarType::Int ? to_string(va->range) : to_string(va->values)},
                                      {vb->name, vb->type == VarType::Int ? to_string(vb->range) : to_string(vb->values)}}}};
            out.push_back(std::move(f));
            continue;
        }

        Support sa = literal_support(spec, q.lit_a, *va, conc, env);
        Support sb = literal_support(spec, q.lit_b, *vb, conc, env);
        if (!sa.possible() || !sb.possible())
            continue;
        std::optional<std::pair<std::size_t, std::size_t>> witness;
        if (!sa.anywhere && !sb.anywhere) {
            for (auto x : sa.steps)
                for (auto y : sb.steps)
                    if (!witness && (x == y || conc.concurrent(x, y)))
                        witness = std::pair(x, y);
            if (!witness)
                continue;
        }
        f.message = "query '" + q.name + "' violated: " + ta + " and " + tb + " may hold together";
        f.evidence = {{"kind", "never-coactive"}, {"mode", "concurrency"}};
        if (witness)
            f.evidence["steps"] = {conc.name(witness->first), conc.name(witness->second)};
        out.push_back(std::move(f));
    }
    return out;
}

}  // namespace grafcet
