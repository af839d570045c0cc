#include "grafcet/varapprox.hpp"

#include <algorithm>
#include <limits>

namespace grafcet {

Count operator+(Count a, Count b)
{
    if (a.inf_ || b.inf_)
        return Count::infinite();
    std::uint64_t r;
    if (__builtin_add_overflow(a.value_, b.value_, &r))
        return Count::infinite();
    return Count::finite(r);
}

Count operator*(Count a, Count b)
{
    if ((!a.inf_ && a.value_ == 0) || (!b.inf_ && b.value_ == 0))
        return Count::finite(0);
    if (a.inf_ || b.inf_)
        return Count::infinite();
    std::uint64_t r;
    if (__builtin_mul_overflow(a.value_, b.value_, &r))
        return Count::infinite();
    return Count::finite(r);
}

bool operator<(Count a, Count b)
{
    if (a.inf_)
        return false;
    if (b.inf_)
        return true;
    return a.value_ < b.value_;
}

std::string Count::str() const
{
    return inf_ ? "inf" : std::to_string(value_);
}

const ExecutionBound* ExecutionBounds::find(std::string_view partial, std::string_view action) const
{
    for (const auto& b : actions)
        if (b.partial == partial && b.action == action)
            return &b;
    return nullptr;
}

namespace {

Count to_count(const Integer& v)
{
    if (v > std::numeric_limits<std::uint64_t>::max())
        return Count::infinite();
    return Count::finite(v.convert_to<std::uint64_t>());
}

void add_reason(std::vector<std::string>& reasons, const std::string& r)
{
    if (std::find(reasons.begin(), reasons.end(), r) == reasons.end())
        reasons.push_back(r);
}

}  // namespace

ExecutionBounds bound_executions(const GrafcetSpec& spec, const HierarchyGraph& graph,
                                 const std::vector<PartialAnalysis>& partials)
{
    ExecutionBounds out;
    const std::size_t n = spec.partials.size();
    out.step_activations.resize(n);
    out.step_reasons.resize(n);

    std::vector<std::size_t> order;
    for (const auto& id : graph.order)
        if (auto i = spec.partial_index(id))
            order.push_back(*i);

    for (auto p : order) {
        const auto& pa = partials[p];
        const auto& net = pa.net;
        const auto& inv = pa.invariants;
        const std::size_t steps = net.step_count();
        auto& act = out.step_activations[p];
        auto& why = out.step_reasons[p];
        act.assign(steps, Count::finite(0));
        why.assign(steps, {});

        Integer nmax = 0;
        for (const auto& y : inv.s.vectors)
            for (const auto& v : y)
                nmax = std::max(nmax, v);
        const auto on_loop = inv.transitions_on_loops();

        // Entries into each situation.
        std::vector<Count> mult;
        std::vector<bool> host_unbounded;
        for (const auto& r : pa.situations) {
            Count m = Count::finite(1);
            bool unbounded = false;
            const auto& src = r.situation.source;
            if (src.kind == SituationSource::Kind::Enclosing || src.kind == SituationSource::Kind::Forcing) {
                auto h = spec.partial_index(src.partial);
                std::optional<std::size_t> hs;
                if (h)
                    hs = spec.partials[*h].step_index(src.step);
                if (!graph.acyclic() || !h || !hs || out.step_activations[*h].size() <= *hs) {
                    m = Count::infinite();
                } else {
                    m = out.step_activations[*h][*hs];
                    if (m == Count::finite(0))
                        m = Count::finite(1);
                }
                unbounded = m.is_infinite();
            }
            mult.push_back(m);
            host_unbounded.push_back(unbounded);
        }

        for (std::size_t s = 0; s < steps; ++s) {
            if (!pa.merged.reachable.test(s)) {
                why[s] = {"unreachable"};
                continue;
            }
            if (!inv.complete()) {
                act[s] = Count::infinite();
                why[s] = {"analysis-incomplete"};
                continue;
            }
            if (!inv.boundedness.step_bound[s]) {
                act[s] = Count::infinite();
                why[s] = {"uncovered-S-invariant"};
                continue;
            }
            bool loop = std::any_of(net.preset(s).begin(), net.preset(s).end(), [&](std::size_t t) { return on_loop[t]; });
            if (loop) {
                act[s] = Count::infinite();
                why[s] = {"T-invariant-loop"};
                continue;
            }
            Count total = Count::finite(0);
            for (std::size_t i = 0; i < pa.situations.size(); ++i) {
                const auto& r = pa.situations[i];
                if (!r.reachable.test(s))
                    continue;
                Count initial = Count::finite(r.situation.steps.size());
                total = total + mult[i] * to_count(nmax) * initial;
                if (host_unbounded[i])
                    add_reason(why[s], "host-unbounded");
            }
            add_reason(why[s], "n*|S^I|");
            act[s] = total;
        }
    }

    for (std::size_t p = 0; p < n; ++p) {
        const auto& part = spec.partials[p];
        for (const auto& a : part.actions) {
            ExecutionBound b;
            b.partial = part.id;
            b.action = action_id(a);
            b.step = action_step(a);
            if (auto s = part.step_index(b.step); s && *s < out.step_activations[p].size()) {
                b.count = out.step_activations[p][*s];
                b.reasons = out.step_reasons[p][*s];
            }
            out.actions.push_back(std::move(b));
        }
    }
    return out;
}

namespace {

struct Linear {
    __int128 coef = 0;
    __int128 constant = 0;
};

constexpr __int128 kLimit = static_cast<__int128>(1) << 62;

bool in_range(const Linear& l)
{
    return l.coef > -kLimit && l.coef < kLimit && l.constant > -kLimit && l.constant < kLimit;
}

// coef * v + constant, when the expression has that form.
std::optional<Linear> linear_in(const Expr& e, std::string_view v)
{
    switch (e.op) {
    case ExprOp::IntLit: return Linear{0, e.value};
    case ExprOp::Var:
        if (e.name == v)
            return Linear{1, 0};
        return std::nullopt;
    case ExprOp::Add:
    case ExprOp::Sub: {
        auto a = linear_in(e.args[0], v);
        auto b = linear_in(e.args[1], v);
        if (!a || !b)
            return std::nullopt;
        int sign = e.op == ExprOp::Add ? 1 : -1;
        Linear r{a->coef + sign * b->coef, a->constant + sign * b->constant};
        return in_range(r) ? std::optional(r) : std::nullopt;
    }
    case ExprOp::Mul: {
        auto a = linear_in(e.args[0], v);
        auto b = linear_in(e.args[1], v);
        if (!a || !b)
            return std::nullopt;
        if (a->coef != 0 && b->coef != 0)
            return std::nullopt;
        Linear r{a->coef * b->constant + b->coef * a->constant, a->constant * b->constant};
        return in_range(r) ? std::optional(r) : std::nullopt;
    }
    default: return std::nullopt;
    }
}

std::optional<std::int64_t> narrow(__int128 v)
{
    if (v < std::numeric_limits<std::int64_t>::min() || v > std::numeric_limits<std::int64_t>::max())
        return std::nullopt;
    return static_cast<std::int64_t>(v);
}

}  // namespace

WriterEffect classify_writer(const StoredAction& a)
{
    auto l = linear_in(a.value, a.var);
    if (!l)
        return {};
    if (l->coef == 0)
        return {WriterEffect::Kind::Constant, static_cast<std::int64_t>(l->constant)};
    if (l->coef == 1)
        return {WriterEffect::Kind::Shift, static_cast<std::int64_t>(l->constant)};
    return {};
}

Interval hull_writes(std::int64_t init, const std::vector<std::pair<WriterEffect, Count>>& writers)
{
    __int128 base_lo = init, base_hi = init;
    __int128 down = 0, up = 0;
    bool lo_inf = false, hi_inf = false;
    for (const auto& [effect, count] : writers) {
        if (count == Count::finite(0))
            continue;
        switch (effect.kind) {
        case WriterEffect::Kind::Opaque: return Interval::top();
        case WriterEffect::Kind::Constant:
            base_lo = std::min<__int128>(base_lo, effect.amount);
            base_hi = std::max<__int128>(base_hi, effect.amount);
            break;
        case WriterEffect::Kind::Shift:
            if (effect.amount == 0)
                break;
            if (count.is_infinite()) {
                (effect.amount < 0 ? lo_inf : hi_inf) = true;
                break;
            }
            __int128 delta = static_cast<__int128>(effect.amount) * static_cast<__int128>(count.value());
            if (count.value() > static_cast<std::uint64_t>(kLimit))
                (effect.amount < 0 ? lo_inf : hi_inf) = true;
            else
                (effect.amount < 0 ? down : up) += delta;
            if (down < -kLimit)
                lo_inf = true;
            if (up > kLimit)
                hi_inf = true;
            break;
        }
    }
    Interval r;
    if (!lo_inf)
        r.lo = narrow(std::min<__int128>({base_lo + down, 0, init}));
    if (!hi_inf)
        r.hi = narrow(std::max<__int128>({base_hi + up, 0, init}));
    return r;
}

std::vector<VarApprox> approximate_variables(const GrafcetSpec& spec, const ExecutionBounds& bounds,
                                             const std::vector<PartialAnalysis>& partials)
{
    std::vector<VarApprox> out;
    for (const auto& decl : spec.variables) {
        VarApprox v;
        v.name = decl.name;
        v.kind = decl.kind;
        v.type = decl.type;
        if (decl.kind == VarKind::Input) {
            v.range = Interval::top();
            v.values = BoolSet::both();
            out.push_back(std::move(v));
            continue;
        }
        const std::int64_t init = decl.initial_value();
        v.values = BoolSet::only(init != 0);
        std::vector<std::pair<WriterEffect, Count>> effects;

        for (std::size_t p = 0; p < spec.partials.size(); ++p) {
            const auto& part = spec.partials[p];
            for (const auto& a : part.actions) {
                const auto* b = bounds.find(part.id, action_id(a));
                Count count = b ? b->count : Count::infinite();
                if (const auto* c = std::get_if<ContinuousAction>(&a); c && c->var == decl.name) {
                    v.writers.push_back(global_step_name(part.id, c->id));
                    v.values.can_false = true;
                    auto s = part.step_index(c->step);
                    if (s && partials[p].merged.reachable.test(*s))
                        v.values.can_true = true;
                } else if (const auto* st = std::get_if<StoredAction>(&a); st && st->var == decl.name) {
                    v.writers.push_back(global_step_name(part.id, st->id));
                    if (decl.type == VarType::Int) {
                        effects.emplace_back(classify_writer(*st), count);
                    } else if (!(count == Count::finite(0))) {
                        if (st->value.op == ExprOp::BoolLit || st->value.op == ExprOp::IntLit)
                            (st->value.value != 0 ? v.values.can_true : v.values.can_false) = true;
                        else
                            v.values = BoolSet::both();
                    }
                }
            }
        }
        if (decl.type == VarType::Int)
            v.range = hull_writes(init, effects);
        out.push_back(std::move(v));
    }
    return out;
}

std::string to_string(const Interval& i)
{
    return "[" + (i.lo ? std::to_string(*i.lo) : std::string("-inf")) + ", " +
           (i.hi ? std::to_string(*i.hi) : std::string("+inf")) + "]";
}

std::string to_string(const BoolSet& b)
{
    if (b.can_false && b.can_true)
        return "{false, true}";
    if (b.can_true)
        return "{true}";
    if (b.can_false)
        return "{false}";
    return "{}";
}

}  // namespace grafcet
