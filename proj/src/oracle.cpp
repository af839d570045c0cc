#include "grafcet/oracle.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <limits>
#include <unordered_map>

#include <boost/container_hash/hash.hpp>

namespace grafcet {

bool OracleFacts::concurrent(const std::string& a, const std::string& b) const
{
    return a < b ? concurrent_pairs.count({a, b}) > 0 : concurrent_pairs.count({b, a}) > 0;
}

namespace {

// Possible values of an expression, sorted and unique.
using ValueSet = std::vector<std::int64_t>;

constexpr std::int64_t kIntInputs[] = {-1, 0, 1, 2};
constexpr std::size_t kMaxSet = 64;
constexpr std::size_t kMaxOccurrences = 14;
constexpr std::size_t kMaxFiringSets = 256;
constexpr int kMaxDepth = 64;
constexpr std::uint32_t kRoot = std::numeric_limits<std::uint32_t>::max();

void tidy(ValueSet& v)
{
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    if (v.size() > kMaxSet)
        v.resize(kMaxSet);
}

template <typename F>
ValueSet combine(const ValueSet& a, const ValueSet& b, F f)
{
    ValueSet out;
    for (auto x : a)
        for (auto y : b)
            out.push_back(f(x, y));
    tidy(out);
    return out;
}

bool has(const ValueSet& v, std::int64_t x)
{
    return std::binary_search(v.begin(), v.end(), x);
}

std::int64_t wrap_add(std::int64_t a, std::int64_t b)
{
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r))
        return a > 0 ? std::numeric_limits<std::int64_t>::max() : std::numeric_limits<std::int64_t>::min();
    return r;
}

std::int64_t wrap_mul(std::int64_t a, std::int64_t b)
{
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r))
        return (a > 0) == (b > 0) ? std::numeric_limits<std::int64_t>::max() : std::numeric_limits<std::int64_t>::min();
    return r;
}

struct StoredRef {
    const StoredAction* action;
    std::size_t step;  // global step index
    std::size_t slot;  // value slot of the target variable
    std::string name;
};

struct TransitionRef {
    std::size_t partial;
    std::vector<std::size_t> up, down;
    const Expr* cond;
    std::string name;
};

struct ForcingRef {
    std::size_t target;
    const ForcedSituation* situation;
};

struct Event {
    bool activation;
    std::size_t step;
};

struct Edge {
    std::uint32_t from;
    std::uint32_t to;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> inc;  // counter, amount
};

using State = std::vector<std::int64_t>;

struct StateHash {
    std::size_t operator()(const State& s) const { return boost::hash_range(s.begin(), s.end()); }
};

class Explorer {
public:
    Explorer(const GrafcetSpec& spec, const OracleOptions& opts);
    OracleFacts run();

private:
    struct Ctx {
        const std::int64_t* mark;
        const std::int64_t* val;
        const std::int64_t* prev_mark;  // null outside semantic mode
        const std::int64_t* prev_val;
    };

    struct Evolution {
        State mark;
        std::vector<Event> events;
    };

    struct Outcome {
        State values;
        std::vector<std::uint32_t> executed;  // occurrence indices
    };

    void layout();
    void order_partials();

    ValueSet eval(const Expr& e, const Ctx& c, int depth = 0) const;
    ValueSet continuous_value(const std::string& var, const Ctx& c, int depth) const;
    Ctx context(const State& s) const;

    bool active(const State& mark, std::size_t g) const { return mark[g] > 0; }
    bool frozen(const State& mark, std::size_t p) const;
    bool any_encloser_active(const State& mark, std::size_t p) const;

    void produce(Evolution& e, std::size_t g, int depth);
    void deactivated(Evolution& e, std::size_t g, int depth);
    void clear(Evolution& e, std::size_t p, int depth);
    void apply_forcings(Evolution& e);
    Evolution fire(const State& mark, const std::vector<std::size_t>& set);
    std::vector<std::vector<std::size_t>> maximal_sets(const std::vector<std::size_t>& enabled) const;

    std::vector<Outcome> run_actions(const Evolution& evo, const State& values, const std::int64_t* prev_mark,
                                     const std::int64_t* prev_val);
    void add_successors(std::uint32_t from, const Evolution& evo, const State& values, const std::int64_t* prev_mark,
                        const std::int64_t* prev_val);
    std::uint32_t intern(State s);
    void record(const State& s);
    void mark_incomplete(const std::string& why);
    void bound_counters();

    const GrafcetSpec& spec_;
    OracleOptions opts_;
    bool semantic_;

    std::size_t steps_ = 0;
    std::size_t slots_ = 0;
    std::vector<std::string> step_names_;
    std::vector<std::size_t> step_partial_;
    std::vector<std::size_t> offsets_;
    std::unordered_map<std::string, std::size_t> step_index_;
    std::unordered_map<std::string, std::size_t> slot_of_;
    std::vector<const VariableDecl*> slot_decl_;
    std::unordered_map<std::string, VarType> inputs_;
    std::unordered_map<std::string, std::vector<std::pair<std::size_t, const ContinuousAction*>>> continuous_;

    std::vector<StoredRef> stored_;
    std::vector<std::vector<std::size_t>> on_activation_, on_deactivation_;
    std::vector<std::vector<std::size_t>> encloses_;
    std::vector<std::vector<ForcingRef>> forcing_at_;
    std::vector<std::vector<std::size_t>> enclosers_, marked_, initial_, partial_steps_;
    std::vector<bool> enclosed_only_;
    std::vector<std::size_t> order_;
    std::vector<TransitionRef> transitions_;

    std::unordered_map<State, std::uint32_t, StateHash> ids_;
    std::vector<State> states_;
    std::deque<std::uint32_t> queue_;
    std::vector<Edge> edges_;
    OracleFacts facts_;
};

Explorer::Explorer(const GrafcetSpec& spec, const OracleOptions& opts)
    : spec_(spec), opts_(opts), semantic_(opts.mode == OracleOptions::Mode::Semantic)
{
    if (opts_.multiplicity_cap == 0)
        opts_.multiplicity_cap = 1;
    layout();
    order_partials();
}

void Explorer::layout()
{
    const std::size_t n = spec_.partials.size();
    for (std::size_t p = 0; p < n; ++p) {
        offsets_.push_back(steps_);
        for (const auto& s : spec_.partials[p].steps) {
            auto name = global_step_name(spec_.partials[p].id, s.id);
            step_index_.emplace(name, steps_);
            step_names_.push_back(name);
            step_partial_.push_back(p);
            ++steps_;
        }
    }

    for (const auto& p : spec_.partials)
        for (const auto& a : p.actions)
            if (const auto* c = std::get_if<ContinuousAction>(&a))
                continuous_[c->var].emplace_back(step_index_.at(global_step_name(p.id, c->step)), c);
    for (const auto& v : spec_.variables) {
        if (v.kind == VarKind::Input) {
            inputs_.emplace(v.name, v.type);
        } else if (!continuous_.count(v.name)) {
            slot_of_.emplace(v.name, slots_++);
            slot_decl_.push_back(&v);
        }
    }

    on_activation_.resize(steps_);
    on_deactivation_.resize(steps_);
    encloses_.resize(steps_);
    forcing_at_.resize(steps_);
    enclosers_.resize(n);
    marked_.resize(n);
    initial_.resize(n);
    partial_steps_.resize(n);
    enclosed_only_.assign(n, false);

    std::vector<std::vector<bool>> incoming_kinds(n);  // true = enclosing
    for (std::size_t p = 0; p < n; ++p) {
        const auto& part = spec_.partials[p];
        auto g = [&](const std::string& s) { return step_index_.at(global_step_name(part.id, s)); };
        auto override = opts_.initial_override.find(part.id);
        for (const auto& s : part.steps) {
            partial_steps_[p].push_back(g(s.id));
            if (s.marked)
                marked_[p].push_back(g(s.id));
            if (override == opts_.initial_override.end() && s.initial)
                initial_[p].push_back(g(s.id));
        }
        if (override != opts_.initial_override.end())
            for (const auto& s : override->second)
                initial_[p].push_back(g(s));
        for (const auto& e : part.enclosings) {
            auto target = spec_.partial_index(e.target);
            encloses_[g(e.step)].push_back(*target);
            enclosers_[*target].push_back(g(e.step));
            incoming_kinds[*target].push_back(true);
        }
        for (const auto& t : part.transitions) {
            TransitionRef r{p, {}, {}, &t.condition, global_step_name(part.id, t.id)};
            for (const auto& s : t.upstream)
                r.up.push_back(g(s));
            for (const auto& s : t.downstream)
                r.down.push_back(g(s));
            transitions_.push_back(std::move(r));
        }
        for (const auto& a : part.actions) {
            if (const auto* st = std::get_if<StoredAction>(&a)) {
                std::size_t idx = stored_.size();
                stored_.push_back({st, g(st->step), slot_of_.at(st->var), global_step_name(part.id, st->id)});
                (st->trigger == Trigger::Deactivation ? on_deactivation_ : on_activation_)[g(st->step)].push_back(idx);
            } else if (const auto* f = std::get_if<ForcingAction>(&a)) {
                auto target = spec_.partial_index(f->target);
                forcing_at_[g(f->step)].push_back({*target, &f->situation});
                incoming_kinds[*target].push_back(false);
            }
        }
    }
    for (std::size_t p = 0; p < n; ++p) {
        const auto& in = incoming_kinds[p];
        enclosed_only_[p] = initial_[p].empty() && !in.empty() && std::all_of(in.begin(), in.end(), [](bool b) { return b; });
    }
}

void Explorer::order_partials()
{
    const std::size_t n = spec_.partials.size();
    std::vector<std::vector<std::size_t>> succ(n);
    std::vector<std::size_t> indegree(n, 0);
    for (std::size_t g = 0; g < steps_; ++g) {
        for (auto t : encloses_[g]) {
            succ[step_partial_[g]].push_back(t);
            ++indegree[t];
        }
        for (const auto& f : forcing_at_[g]) {
            succ[step_partial_[g]].push_back(f.target);
            ++indegree[f.target];
        }
    }
    std::vector<bool> done(n, false);
    for (std::size_t round = 0; round < n; ++round) {
        std::size_t pick = n;
        for (std::size_t p = 0; p < n && pick == n; ++p)
            if (!done[p] && indegree[p] == 0)
                pick = p;
        if (pick == n)
            break;
        done[pick] = true;
        order_.push_back(pick);
        for (auto v : succ[pick])
            --indegree[v];
    }
    for (std::size_t p = 0; p < n; ++p)
        if (!done[p])
            order_.push_back(p);
}

Explorer::Ctx Explorer::context(const State& s) const
{
    Ctx c{s.data(), s.data() + steps_, nullptr, nullptr};
    if (semantic_) {
        c.prev_mark = s.data() + steps_ + slots_;
        c.prev_val = s.data() + 2 * steps_ + slots_;
    }
    return c;
}

ValueSet Explorer::continuous_value(const std::string& var, const Ctx& c, int depth) const
{
    auto it = continuous_.find(var);
    if (it == continuous_.end())
        return {0};
    if (depth > 4)
        return {0, 1};
    bool can_true = false, can_false = true;
    for (const auto& [g, action] : it->second) {
        if (c.mark[g] <= 0)
            continue;
        ValueSet cond = semantic_ ? eval(action->condition, c, depth + 1) : ValueSet{0, 1};
        can_true = can_true || has(cond, 1);
        can_false = can_false && has(cond, 0);
    }
    ValueSet out;
    if (can_false)
        out.push_back(0);
    if (can_true)
        out.push_back(1);
    return out;
}

ValueSet Explorer::eval(const Expr& e, const Ctx& c, int depth) const
{
    switch (e.op) {
    case ExprOp::BoolLit:
    case ExprOp::IntLit: return {e.value};
    case ExprOp::Var: {
        if (auto in = inputs_.find(e.name); in != inputs_.end()) {
            if (in->second == VarType::Bool)
                return {0, 1};
            return ValueSet(std::begin(kIntInputs), std::end(kIntInputs));
        }
        if (auto s = slot_of_.find(e.name); s != slot_of_.end())
            return {c.val[s->second]};
        return continuous_value(e.name, c, depth);
    }
    case ExprOp::StepVar: {
        auto g = step_index_.find(global_step_name(e.name, e.step));
        return {g != step_index_.end() && c.mark[g->second] > 0 ? 1 : 0};
    }
    case ExprOp::Not: {
        ValueSet a = eval(e.args[0], c, depth);
        ValueSet out;
        for (auto x : a)
            out.push_back(x == 0);
        tidy(out);
        return out;
    }
    case ExprOp::And: return combine(eval(e.args[0], c, depth), eval(e.args[1], c, depth), [](auto x, auto y) { return std::int64_t(x && y); });
    case ExprOp::Or: return combine(eval(e.args[0], c, depth), eval(e.args[1], c, depth), [](auto x, auto y) { return std::int64_t(x || y); });
    case ExprOp::Rising:
    case ExprOp::Falling: {
        if (!c.prev_mark)
            return {0, 1};
        const Expr& ref = e.args[0];
        std::optional<bool> now, before;
        if (ref.op == ExprOp::StepVar) {
            auto g = step_index_.find(global_step_name(ref.name, ref.step));
            if (g != step_index_.end()) {
                now = c.mark[g->second] > 0;
                before = c.prev_mark[g->second] > 0;
            }
        } else if (auto s = slot_of_.find(ref.name); ref.op == ExprOp::Var && s != slot_of_.end()) {
            now = c.val[s->second] != 0;
            before = c.prev_val[s->second] != 0;
        }
        if (!now)
            return {0, 1};
        bool edge = e.op == ExprOp::Rising ? (*now && !*before) : (!*now && *before);
        return {edge ? 1 : 0};
    }
    case ExprOp::Eq: return combine(eval(e.args[0], c, depth), eval(e.args[1], c, depth), [](auto x, auto y) { return std::int64_t(x == y); });
    case ExprOp::Ne: return combine(eval(e.args[0], c, depth), eval(e.args[1], c, depth), [](auto x, auto y) { return std::int64_t(x != y); });
    case ExprOp::Lt: return combine(eval(e.args[0], c, depth), eval(e.args[1], c, depth), [](auto x, auto y) { return std::int64_t(x < y); });
    case ExprOp::Le: return combine(eval(e.args[0], c, depth), eval(e.args[1], c, depth), [](auto x, auto y) { return std::int64_t(x <= y); });
    case ExprOp::Gt: return combine(eval(e.args[0], c, depth), eval(e.args[1], c, depth), [](auto x, auto y) { return std::int64_t(x > y); });
    case ExprOp::Ge: return combine(eval(e.args[0], c, depth), eval(e.args[1], c, depth), [](auto x, auto y) { return std::int64_t(x >= y); });
    case ExprOp::Add: return combine(eval(e.args[0], c, depth), eval(e.args[1], c, depth), wrap_add);
    case ExprOp::Sub:
        return combine(eval(e.args[0], c, depth), eval(e.args[1], c, depth), [](auto x, auto y) { return wrap_add(x, y == std::numeric_limits<std::int64_t>::min() ? std::numeric_limits<std::int64_t>::max() : -y); });
    case ExprOp::Mul: return combine(eval(e.args[0], c, depth), eval(e.args[1], c, depth), wrap_mul);
    }
    return {0, 1};
}

bool Explorer::frozen(const State& mark, std::size_t p) const
{
    for (std::size_t g = 0; g < steps_; ++g)
        if (mark[g] > 0)
            for (const auto& f : forcing_at_[g])
                if (f.target == p)
                    return true;
    return false;
}

bool Explorer::any_encloser_active(const State& mark, std::size_t p) const
{
    return std::any_of(enclosers_[p].begin(), enclosers_[p].end(), [&](std::size_t g) { return mark[g] > 0; });
}

void Explorer::produce(Evolution& e, std::size_t g, int depth)
{
    if (depth > kMaxDepth) {
        mark_incomplete("activation cascade too deep");
        return;
    }
    if (e.mark[g] >= static_cast<std::int64_t>(opts_.multiplicity_cap)) {
        facts_.saturated = true;
        return;
    }
    // Only a step that was inactive starts its enclosed partials; a second
    // token on an active enclosing step leaves them running as they are.
    bool rising = e.mark[g] == 0;
    ++e.mark[g];
    e.events.push_back({true, g});
    if (rising)
        for (auto target : encloses_[g])
            for (auto m : marked_[target])
                produce(e, m, depth + 1);
}

void Explorer::deactivated(Evolution& e, std::size_t g, int depth)
{
    if (depth > kMaxDepth) {
        mark_incomplete("deactivation cascade too deep");
        return;
    }
    e.events.push_back({false, g});
    for (auto target : encloses_[g])
        if (!any_encloser_active(e.mark, target))
            clear(e, target, depth + 1);
}

void Explorer::clear(Evolution& e, std::size_t p, int depth)
{
    for (auto h : partial_steps_[p]) {
        if (e.mark[h] > 0) {
            e.mark[h] = 0;
            deactivated(e, h, depth);
        }
    }
}

void Explorer::apply_forcings(Evolution& e)
{
    for (auto p : order_) {
        for (auto g : partial_steps_[p]) {
            if (e.mark[g] <= 0)
                continue;
            for (const auto& f : forcing_at_[g]) {
                if (f.situation->kind == ForcedSituation::Kind::Current)
                    continue;
                std::vector<bool> wanted(steps_, false);
                if (f.situation->kind == ForcedSituation::Kind::Init) {
                    for (auto h : initial_[f.target])
                        wanted[h] = true;
                } else {
                    for (const auto& s : f.situation->steps)
                        wanted[step_index_.at(global_step_name(spec_.partials[f.target].id, s))] = true;
                }
                for (auto h : partial_steps_[f.target]) {
                    if (wanted[h] && e.mark[h] == 0) {
                        produce(e, h, 0);
                    } else if (wanted[h]) {
                        e.mark[h] = 1;
                    } else if (e.mark[h] > 0) {
                        e.mark[h] = 0;
                        deactivated(e, h, 0);
                    }
                }
            }
        }
    }
}

Explorer::Evolution Explorer::fire(const State& mark, const std::vector<std::size_t>& set)
{
    // Net token change per step: a step emptied and refilled by the same
    // evolution stays active without deactivation or activation events.
    std::vector<std::int64_t> delta(steps_, 0);
    for (auto i : set) {
        const auto& t = transitions_[i];
        for (auto g : t.up)
            if (std::find(t.down.begin(), t.down.end(), g) == t.down.end())
                --delta[g];
        for (auto g : t.down)
            if (std::find(t.up.begin(), t.up.end(), g) == t.up.end())
                ++delta[g];
    }
    // Removals first, then their cascades, then productions host-first. A
    // partial cleared because its encloser went away receives no tokens from
    // transitions that fired alongside.
    Evolution evo{mark, {}};
    std::vector<std::size_t> emptied;
    for (std::size_t g = 0; g < steps_; ++g)
        if (delta[g] < 0) {
            evo.mark[g] = std::max<std::int64_t>(0, evo.mark[g] + delta[g]);
            if (evo.mark[g] == 0)
                emptied.push_back(g);
        }
    for (auto g : emptied)
        deactivated(evo, g, 0);
    for (auto p : order_) {
        if (enclosed_only_[p] && !any_encloser_active(evo.mark, p))
            continue;
        for (auto g : partial_steps_[p])
            for (std::int64_t k = 0; k < delta[g]; ++k)
                produce(evo, g, 0);
    }
    apply_forcings(evo);
    return evo;
}

// Maximal subsets of `enabled` in which no two transitions share an upstream
// step, in lexicographic order of their first members.
std::vector<std::vector<std::size_t>> Explorer::maximal_sets(const std::vector<std::size_t>& enabled) const
{
    auto conflict = [&](std::size_t a, std::size_t b) {
        for (auto g : transitions_[a].up)
            if (std::find(transitions_[b].up.begin(), transitions_[b].up.end(), g) != transitions_[b].up.end())
                return true;
        return false;
    };
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> chosen;
    std::function<void(std::size_t)> grow = [&](std::size_t k) {
        if (out.size() >= kMaxFiringSets)
            return;
        if (k == enabled.size()) {
            // Maximal: every skipped transition conflicts with a chosen one.
            for (auto e : enabled)
                if (std::find(chosen.begin(), chosen.end(), e) == chosen.end() &&
                    std::none_of(chosen.begin(), chosen.end(), [&](std::size_t c) { return conflict(e, c); }))
                    return;
            out.push_back(chosen);
            return;
        }
        auto t = enabled[k];
        if (std::none_of(chosen.begin(), chosen.end(), [&](std::size_t c) { return conflict(t, c); })) {
            chosen.push_back(t);
            grow(k + 1);
            chosen.pop_back();
        }
        grow(k + 1);
    };
    grow(0);
    return out;
}

std::vector<Explorer::Outcome> Explorer::run_actions(const Evolution& evo, const State& values,
                                                     const std::int64_t* prev_mark, const std::int64_t* prev_val)
{
    std::vector<std::size_t> occ;
    for (const auto& ev : evo.events)
        for (auto a : (ev.activation ? on_activation_ : on_deactivation_)[ev.step])
            occ.push_back(a);
    if (occ.size() > kMaxOccurrences) {
        mark_incomplete("too many simultaneous stored actions");
        occ.resize(kMaxOccurrences);
    }

    Ctx pre{evo.mark.data(), values.data(), prev_mark, prev_val};
    std::vector<bool> can_run(occ.size(), true), can_skip(occ.size(), true);
    if (semantic_) {
        for (std::size_t i = 0; i < occ.size(); ++i) {
            ValueSet c = eval(stored_[occ[i]].action->condition, pre);
            can_run[i] = has(c, 1);
            can_skip[i] = has(c, 0);
        }
    }

    // Every subset of the occurrences, in every order.
    std::vector<Outcome> out;
    std::set<std::pair<std::uint32_t, State>> seen;
    std::vector<std::uint32_t> executed;
    auto dfs = [&](auto&& self, std::uint32_t mask, const State& vals) -> void {
        if (!seen.insert({mask, vals}).second)
            return;
        bool valid = true;
        for (std::size_t i = 0; i < occ.size(); ++i)
            if (!(mask >> i & 1) && !can_skip[i])
                valid = false;
        if (valid)
            out.push_back({vals, executed});
        for (std::size_t i = 0; i < occ.size(); ++i) {
            if ((mask >> i & 1) || !can_run[i])
                continue;
            const auto& ref = stored_[occ[i]];
            Ctx c{evo.mark.data(), vals.data(), prev_mark, prev_val};
            ValueSet results = eval(ref.action->value, c);
            if (slot_decl_[ref.slot]->type == VarType::Bool) {
                for (auto& r : results)
                    r = r != 0;
                tidy(results);
            }
            executed.push_back(static_cast<std::uint32_t>(i));
            for (auto r : results) {
                State next = vals;
                next[ref.slot] = r;
                self(self, mask | (1u << i), next);
            }
            executed.pop_back();
        }
    };
    dfs(dfs, 0, values);

    // Map occurrence indices back to action indices.
    for (auto& o : out)
        for (auto& x : o.executed)
            x = static_cast<std::uint32_t>(occ[x]);
    return out;
}

void Explorer::mark_incomplete(const std::string& why)
{
    if (facts_.complete) {
        facts_.complete = false;
        facts_.incomplete_reason = why;
    }
}

std::uint32_t Explorer::intern(State s)
{
    auto it = ids_.find(s);
    if (it != ids_.end())
        return it->second;
    if (states_.size() >= opts_.state_cap) {
        mark_incomplete("state cap reached");
        return kRoot;
    }
    auto id = static_cast<std::uint32_t>(states_.size());
    ids_.emplace(s, id);
    record(s);
    states_.push_back(std::move(s));
    queue_.push_back(id);
    return id;
}

void Explorer::add_successors(std::uint32_t from, const Evolution& evo, const State& values,
                              const std::int64_t* prev_mark, const std::int64_t* prev_val)
{
    for (auto& o : run_actions(evo, values, prev_mark, prev_val)) {
        bool in_window = std::all_of(o.values.begin(), o.values.end(),
                                     [&](std::int64_t v) { return v >= -opts_.value_window && v <= opts_.value_window; });
        if (!in_window) {
            mark_incomplete("value window exceeded");
            continue;
        }
        State s = evo.mark;
        s.insert(s.end(), o.values.begin(), o.values.end());
        if (semantic_) {
            s.insert(s.end(), prev_mark, prev_mark + steps_);
            s.insert(s.end(), prev_val, prev_val + slots_);
        }
        std::uint32_t to = intern(std::move(s));
        if (to == kRoot)
            continue;
        Edge edge{from, to, {}};
        std::map<std::uint32_t, std::uint32_t> inc;
        for (auto a : o.executed)
            ++inc[a];
        for (const auto& ev : evo.events)
            if (ev.activation)
                ++inc[static_cast<std::uint32_t>(stored_.size() + ev.step)];
        edge.inc.assign(inc.begin(), inc.end());
        edges_.push_back(std::move(edge));
    }
}

void Explorer::record(const State& s)
{
    Ctx c = context(s);
    std::vector<std::size_t> on;
    for (std::size_t g = 0; g < steps_; ++g)
        if (s[g] > 0)
            on.push_back(g);
    for (auto g : on)
        facts_.reachable_steps.insert(step_names_[g]);
    for (std::size_t i = 0; i < on.size(); ++i) {
        for (std::size_t j = i + 1; j < on.size(); ++j) {
            auto a = step_names_[on[i]], b = step_names_[on[j]];
            if (b < a)
                std::swap(a, b);
            facts_.concurrent_pairs.emplace(a, b);
        }
    }
    for (const auto& v : spec_.variables) {
        if (v.kind == VarKind::Input)
            continue;
        auto& seen = facts_.values[v.name];
        if (auto slot = slot_of_.find(v.name); slot != slot_of_.end())
            seen.insert(c.val[slot->second]);
        else
            for (auto x : continuous_value(v.name, c, 0))
                seen.insert(x);
    }
    for (std::size_t i = 0; i < stored_.size(); ++i) {
        for (std::size_t j = i + 1; j < stored_.size(); ++j) {
            if (stored_[i].slot != stored_[j].slot || s[stored_[i].step] <= 0 || s[stored_[j].step] <= 0)
                continue;
            auto a = stored_[i].name, b = stored_[j].name;
            if (b < a)
                std::swap(a, b);
            facts_.write_conflicts.emplace(a, b);
        }
    }
    for (const auto& t : transitions_)
        if (!facts_.satisfiable_conditions.count(t.name) && has(eval(*t.cond, c), 1))
            facts_.satisfiable_conditions.insert(t.name);
    for (const auto& p : spec_.partials) {
        for (const auto& a : p.actions) {
            const Expr* cond = nullptr;
            if (const auto* ca = std::get_if<ContinuousAction>(&a))
                cond = &ca->condition;
            else if (const auto* sa = std::get_if<StoredAction>(&a))
                cond = &sa->condition;
            if (!cond)
                continue;
            auto name = global_step_name(p.id, action_id(a));
            if (!facts_.satisfiable_conditions.count(name) && has(eval(*cond, c), 1))
                facts_.satisfiable_conditions.insert(name);
        }
    }
}

// Longest path per counter over the state graph. A counter incremented on
// an edge inside a strongly connected component is unbounded.
void Explorer::bound_counters()
{
    const std::size_t n = states_.size();
    const std::size_t counters = stored_.size() + steps_;
    std::vector<std::vector<std::uint32_t>> out(n);
    std::vector<std::uint32_t> roots;
    for (std::uint32_t e = 0; e < edges_.size(); ++e) {
        if (edges_[e].from == kRoot)
            roots.push_back(e);
        else
            out[edges_[e].from].push_back(e);
    }

    // Iterative Tarjan; components come out sinks first.
    std::vector<std::int64_t> index(n, -1), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::uint32_t> comp(n, 0), stack;
    std::vector<std::vector<std::uint32_t>> members;
    std::int64_t next = 0;
    for (std::uint32_t root = 0; root < n; ++root) {
        if (index[root] >= 0)
            continue;
        std::vector<std::pair<std::uint32_t, std::size_t>> call{{root, 0}};
        index[root] = low[root] = next++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            auto& [v, i] = call.back();
            if (i < out[v].size()) {
                std::uint32_t w = edges_[out[v][i++]].to;
                if (index[w] < 0) {
                    index[w] = low[w] = next++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.emplace_back(w, 0);
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            if (low[v] == index[v]) {
                std::vector<std::uint32_t> scc;
                std::uint32_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp[w] = static_cast<std::uint32_t>(members.size());
                    scc.push_back(w);
                } while (w != v);
                members.push_back(std::move(scc));
            }
            std::uint32_t done = v;
            call.pop_back();
            if (!call.empty())
                low[call.back().first] = std::min(low[call.back().first], low[done]);
        }
    }

    std::vector<bool> unbounded(counters, false);
    std::vector<std::vector<std::uint64_t>> best(members.size(), std::vector<std::uint64_t>(counters, 0));
    for (std::size_t c = 0; c < members.size(); ++c) {
        for (auto v : members[c]) {
            for (auto e : out[v]) {
                const auto& edge = edges_[e];
                if (comp[edge.to] == c) {
                    for (auto [k, amount] : edge.inc)
                        if (amount > 0)
                            unbounded[k] = true;
                    continue;
                }
                std::vector<std::uint64_t> candidate = best[comp[edge.to]];
                for (auto [k, amount] : edge.inc)
                    candidate[k] += amount;
                for (std::size_t k = 0; k < counters; ++k)
                    best[c][k] = std::max(best[c][k], candidate[k]);
            }
        }
    }
    std::vector<std::uint64_t> total(counters, 0);
    for (auto e : roots) {
        std::vector<std::uint64_t> candidate = best[comp[edges_[e].to]];
        for (auto [k, amount] : edges_[e].inc)
            candidate[k] += amount;
        for (std::size_t k = 0; k < counters; ++k)
            total[k] = std::max(total[k], candidate[k]);
    }
    for (std::size_t k = 0; k < counters; ++k) {
        std::optional<std::uint64_t> v;
        if (!unbounded[k])
            v = total[k];
        if (k < stored_.size())
            facts_.max_executions[stored_[k].name] = v;
        else
            facts_.max_activations[step_names_[k - stored_.size()]] = v;
    }
}

OracleFacts Explorer::run()
{
    // Initial situation: initial steps (with their enclosings), then forcings.
    Evolution init{State(steps_, 0), {}};
    for (auto p : order_)
        for (auto g : initial_[p])
            produce(init, g, 0);
    apply_forcings(init);
    State values(slots_, 0);
    for (std::size_t i = 0; i < slots_; ++i)
        values[i] = slot_decl_[i]->initial_value();
    State no_steps(steps_, 0);
    add_successors(kRoot, init, values, semantic_ ? no_steps.data() : nullptr, semantic_ ? values.data() : nullptr);

    while (!queue_.empty()) {
        std::uint32_t id = queue_.front();
        queue_.pop_front();
        const State current = states_[id];
        const State mark(current.begin(), current.begin() + static_cast<std::ptrdiff_t>(steps_));
        const State vals(current.begin() + static_cast<std::ptrdiff_t>(steps_),
                         current.begin() + static_cast<std::ptrdiff_t>(steps_ + slots_));
        Ctx c = context(current);
        const std::int64_t* prev_mark = semantic_ ? mark.data() : nullptr;
        const std::int64_t* prev_val = semantic_ ? vals.data() : nullptr;

        std::vector<std::size_t> enabled;
        for (std::size_t i = 0; i < transitions_.size(); ++i) {
            const auto& t = transitions_[i];
            if (frozen(mark, t.partial))
                continue;
            if (!std::all_of(t.up.begin(), t.up.end(), [&](std::size_t g) { return mark[g] > 0; }))
                continue;
            if (t.up.empty() && enclosed_only_[t.partial] && !any_encloser_active(mark, t.partial))
                continue;
            if (semantic_ && !has(eval(*t.cond, c), 1))
                continue;
            enabled.push_back(i);
        }
        for (auto i : enabled)
            add_successors(id, fire(mark, {i}), vals, prev_mark, prev_val);
        if (opts_.simultaneous)
            for (const auto& set : maximal_sets(enabled))
                if (set.size() > 1)
                    add_successors(id, fire(mark, set), vals, prev_mark, prev_val);
        if (semantic_) {
            // Inputs may change without any transition firing.
            Evolution idle{mark, {}};
            apply_forcings(idle);
            add_successors(id, idle, vals, prev_mark, prev_val);
        }
    }

    facts_.states = states_.size();
    bound_counters();
    return facts_;
}

}  // namespace

OracleFacts explore(const GrafcetSpec& spec, const OracleOptions& opts)
{
    Explorer e(spec, opts);
    return e.run();
}

}  // namespace grafcet
