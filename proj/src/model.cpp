#include "grafcet/model.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

namespace grafcet {

const std::string& action_id(const Action& a)
{
    return std::visit([](const auto& x) -> const std::string& { return x.id; }, a);
}

const std::string& action_step(const Action& a)
{
    return std::visit([](const auto& x) -> const std::string& { return x.step; }, a);
}

std::optional<std::size_t> PartialGrafcet::step_index(std::string_view step) const
{
    for (std::size_t i = 0; i < steps.size(); ++i)
        if (steps[i].id == step)
            return i;
    return std::nullopt;
}

const Step* PartialGrafcet::find_step(std::string_view step) const
{
    auto i = step_index(step);
    return i ? &steps[*i] : nullptr;
}

bool PartialGrafcet::enclosed() const
{
    return std::any_of(steps.begin(), steps.end(), [](const Step& s) { return s.marked; });
}

const VariableDecl* GrafcetSpec::variable(std::string_view name) const
{
    for (const auto& v : variables)
        if (v.name == name)
            return &v;
    return nullptr;
}

const PartialGrafcet* GrafcetSpec::partial(std::string_view id) const
{
    auto i = partial_index(id);
    return i ? &partials[*i] : nullptr;
}

std::optional<std::size_t> GrafcetSpec::partial_index(std::string_view id) const
{
    for (std::size_t i = 0; i < partials.size(); ++i)
        if (partials[i].id == id)
            return i;
    return std::nullopt;
}

std::optional<VarType> SpecScope::variable_type(std::string_view name) const
{
    if (const auto* v = spec_.variable(name))
        return v->type;
    return std::nullopt;
}

bool SpecScope::has_step(std::string_view partial, std::string_view step) const
{
    const auto* p = spec_.partial(partial);
    return p && p->find_step(step);
}

std::string global_step_name(std::string_view partial, std::string_view step)
{
    std::string out(partial);
    out += '.';
    out += step;
    return out;
}

std::optional<std::pair<std::string, std::string>> split_global_step(std::string_view name)
{
    auto dot = name.find('.');
    if (dot == std::string_view::npos)
        return std::nullopt;
    return std::make_pair(std::string(name.substr(0, dot)), std::string(name.substr(dot + 1)));
}

std::string_view to_string(VarKind k)
{
    switch (k) {
    case VarKind::Input: return "input";
    case VarKind::Internal: return "internal";
    case VarKind::Output: return "output";
    }
    return "?";
}

std::string_view to_string(VarType t)
{
    return t == VarType::Bool ? "bool" : "int";
}

std::string_view to_string(Trigger t)
{
    switch (t) {
    case Trigger::Activation: return "activation";
    case Trigger::Deactivation: return "deactivation";
    case Trigger::During: return "during";
    }
    return "?";
}

namespace {

bool is_identifier(std::string_view s)
{
    if (s.empty())
        return false;
    return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

class Validator {
public:
    explicit Validator(const GrafcetSpec& spec) : spec_(spec) {}

    std::vector<Finding> run()
    {
        if (spec_.partials.empty())
            report({}, {}, "specification declares no partial Grafcet");
        check_variables();
        check_partial_ids();
        for (const auto& p : spec_.partials)
            check_partial(p);
        check_output_writers();
        check_queries();
        sort_findings(out_);
        return std::move(out_);
    }

private:
    void report(std::string partial, std::string element, std::string message)
    {
        Finding f;
        f.kind = FindingKind::InvalidModel;
        f.severity = Severity::Error;
        f.location = {std::move(partial), std::move(element)};
        f.message = std::move(message);
        out_.push_back(std::move(f));
    }

    void check_variables()
    {
        std::set<std::string> seen;
        for (const auto& v : spec_.variables) {
            if (!is_identifier(v.name) || std::isdigit(static_cast<unsigned char>(v.name[0])))
                report({}, v.name, "variable name '" + v.name + "' is not an identifier");
            if (!seen.insert(v.name).second)
                report({}, v.name, "variable '" + v.name + "' declared more than once");
            if (v.kind == VarKind::Input && v.init)
                report({}, v.name, "input '" + v.name + "' must not have an initial value");
            if (v.type == VarType::Bool && v.init && *v.init != 0 && *v.init != 1)
                report({}, v.name, "Boolean variable '" + v.name + "' initialised outside {0,1}");
        }
    }

    void check_partial_ids()
    {
        std::set<std::string> seen;
        for (const auto& p : spec_.partials) {
            if (!is_identifier(p.id))
                report(p.id, {}, "partial Grafcet id '" + p.id + "' is not an identifier");
            if (!seen.insert(p.id).second)
                report(p.id, {}, "partial Grafcet '" + p.id + "' declared more than once");
        }
    }

    void check_expr(const Expr& e, VarType expected, const PartialGrafcet& p, const std::string& where)
    {
        SpecScope scope(spec_, p.id);
        if (auto err = type_error(e, expected, scope))
            report(p.id, where, *err);
    }

    void check_partial(const PartialGrafcet& p)
    {
        std::set<std::string> steps;
        for (const auto& s : p.steps) {
            if (!is_identifier(s.id))
                report(p.id, s.id, "step id '" + s.id + "' is not an identifier");
            if (!steps.insert(s.id).second)
                report(p.id, s.id, "step '" + s.id + "' declared more than once");
        }
        auto has = [&](const std::string& s) { return steps.count(s) > 0; };

        std::set<std::pair<std::string, std::string>> encl;
        for (const auto& e : p.enclosings) {
            if (!has(e.step))
                report(p.id, e.step, "enclosing step '" + e.step + "' is not a step of '" + p.id + "'");
            if (e.target == p.id)
                report(p.id, e.step, "partial Grafcet '" + p.id + "' encloses itself");
            else if (!spec_.partial(e.target))
                report(p.id, e.step, "enclosing target '" + e.target + "' is not a declared partial Grafcet");
            if (!encl.insert({e.step, e.target}).second)
                report(p.id, e.step, "duplicate enclosing " + e.step + " -> " + e.target);
        }

        std::set<std::string> tids;
        for (const auto& t : p.transitions) {
            if (!tids.insert(t.id).second)
                report(p.id, t.id, "transition '" + t.id + "' declared more than once");
            if (t.upstream.empty() && t.downstream.empty())
                report(p.id, t.id, "empty transition: no upstream and no downstream steps");
            for (const auto* side : {&t.upstream, &t.downstream}) {
                std::set<std::string> dup;
                for (const auto& s : *side) {
                    if (!has(s))
                        report(p.id, t.id, "transition '" + t.id + "' references unknown step '" + s + "'");
                    if (!dup.insert(s).second)
                        report(p.id, t.id, "transition '" + t.id + "' lists step '" + s + "' twice");
                }
            }
            check_expr(t.condition, VarType::Bool, p, t.id);
        }

        std::set<std::string> aids;
        for (const auto& a : p.actions) {
            const std::string& id = action_id(a);
            if (!aids.insert(id).second)
                report(p.id, id, "action '" + id + "' declared more than once");
            if (!has(action_step(a)))
                report(p.id, id, "action '" + id + "' is attached to unknown step '" + action_step(a) + "'");
            std::visit([&](const auto& x) { check_action(p, x); }, a);
        }
    }

    void check_action(const PartialGrafcet& p, const ContinuousAction& a)
    {
        const auto* v = spec_.variable(a.var);
        if (!v)
            report(p.id, a.id, "continuous action writes undeclared variable '" + a.var + "'");
        else if (v->kind != VarKind::Output || v->type != VarType::Bool)
            report(p.id, a.id, "continuous action must write a Boolean output, '" + a.var + "' is not one");
        check_expr(a.condition, VarType::Bool, p, a.id);
    }

    void check_action(const PartialGrafcet& p, const StoredAction& a)
    {
        const auto* v = spec_.variable(a.var);
        if (!v) {
            report(p.id, a.id, "stored action writes undeclared variable '" + a.var + "'");
        } else {
            if (v->kind == VarKind::Input)
                report(p.id, a.id, "stored action writes input '" + a.var + "'");
            check_expr(a.value, v->type, p, a.id);
        }
        check_expr(a.condition, VarType::Bool, p, a.id);
    }

    void check_action(const PartialGrafcet& p, const ForcingAction& a)
    {
        const auto* target = spec_.partial(a.target);
        if (!target) {
            report(p.id, a.id, "forcing order targets undeclared partial Grafcet '" + a.target + "'");
            return;
        }
        if (a.target == p.id)
            report(p.id, a.id, "partial Grafcet '" + p.id + "' forces itself");
        if (a.situation.kind == ForcedSituation::Kind::Steps) {
            for (const auto& s : a.situation.steps)
                if (!target->find_step(s))
                    report(p.id, a.id, "forced situation names unknown step '" + a.target + "." + s + "'");
        }
    }

    void check_output_writers()
    {
        std::map<std::string, std::vector<std::string>> continuous;
        std::map<std::string, std::vector<std::string>> stored;
        for (const auto& p : spec_.partials) {
            for (const auto& a : p.actions) {
                if (const auto* c = std::get_if<ContinuousAction>(&a))
                    continuous[c->var].push_back(p.id + "." + c->id);
                else if (const auto* s = std::get_if<StoredAction>(&a))
                    stored[s->var].push_back(p.id + "." + s->id);
            }
        }
        for (const auto& [var, writers] : continuous) {
            auto it = stored.find(var);
            if (it == stored.end())
                continue;
            report({}, var,
                   "output '" + var + "' is written by continuous action " + writers.front() + " and stored action " +
                       it->second.front());
        }
    }

    void check_queries()
    {
        for (const auto& q : spec_.queries) {
            if (q.kind == SafetyQuery::Kind::NeverConcurrent) {
                for (const auto* s : {&q.step_a, &q.step_b}) {
                    auto parts = split_global_step(*s);
                    const PartialGrafcet* p = parts ? spec_.partial(parts->first) : nullptr;
                    if (!p || !p->find_step(parts->second))
                        report({}, q.name, "query '" + q.name + "' references unknown step '" + *s + "'");
                }
            } else {
                for (const auto* l : {&q.lit_a, &q.lit_b}) {
                    const auto* v = spec_.variable(l->var);
                    if (!v)
                        report({}, q.name, "query '" + q.name + "' references unknown variable '" + l->var + "'");
                    else if (v->type == VarType::Bool && l->value != 0 && l->value != 1)
                        report({}, q.name, "query '" + q.name + "' compares Boolean '" + l->var + "' with a non-Boolean value");
                }
            }
        }
    }

    const GrafcetSpec& spec_;
    std::vector<Finding> out_;
};

}  // namespace

std::vector<Finding> validate(const GrafcetSpec& spec)
{
    return Validator(spec).run();
}

}  // namespace grafcet
