#include "grafcet/reachconc.hpp"

#include <algorithm>
#include <deque>
#include <random>

namespace grafcet {

ConcurrencyMap init_concurrency(const PartialNet& net, const StepSet& initial)
{
    ConcurrencyMap conc(net.step_count(), net.empty_set());
    for (auto s : members(initial)) {
        conc[s] = initial;
        conc[s].reset(s);
    }
    return conc;
}

void concurr_analysis(const PartialNet& net, ConcurrencyMap& conc, std::size_t t, std::size_t s,
                      const StepSet& source_seed, std::vector<std::size_t>& grown)
{
    StepSet add = net.empty_set();
    for (auto d : net.downstream(t))
        if (d != s)
            add.set(d);

    const auto& up = net.upstream(t);
    if (up.empty()) {
        add |= source_seed;
    } else {
        StepSet common = conc[up.front()];
        for (std::size_t i = 1; i < up.size(); ++i)
            common &= conc[up[i]];
        add |= common;
    }
    // `common` may contain s itself: s was already active next to every
    // upstream step, so t gives it a second token.

    if (!add.is_subset_of(conc[s])) {
        conc[s] |= add;
        grown.push_back(s);
    }
    for (auto other : members(conc[s])) {
        if (!conc[other].test(s)) {
            conc[other].set(s);
            grown.push_back(other);
        }
    }
}

namespace {

// Deduplicating worklist of transitions: FIFO, or random order when seeded.
class Worklist {
public:
    Worklist(std::size_t transitions, std::optional<std::uint64_t> seed) : pending_(transitions, false)
    {
        if (seed)
            rng_.emplace(*seed);
    }

    void push(std::size_t t)
    {
        if (pending_[t])
            return;
        pending_[t] = true;
        queue_.push_back(t);
        ++enqueues_;
    }

    bool empty() const { return queue_.empty(); }

    std::size_t pop()
    {
        std::size_t t;
        if (rng_) {
            std::uniform_int_distribution<std::size_t> pick(0, queue_.size() - 1);
            auto i = pick(*rng_);
            t = queue_[i];
            queue_.erase(queue_.begin() + static_cast<std::ptrdiff_t>(i));
        } else {
            t = queue_.front();
            queue_.pop_front();
        }
        pending_[t] = false;
        return t;
    }

    std::size_t enqueues() const { return enqueues_; }

private:
    std::vector<bool> pending_;
    std::deque<std::size_t> queue_;
    std::optional<std::mt19937_64> rng_;
    std::size_t enqueues_ = 0;
};

ReachConcResult run_fixpoint(const PartialNet& net, const InitialSituation& situation, ConcurrencyMap conc,
                             const StepSet& source_seed, const ReachOptions& opts)
{
    ReachConcResult r;
    r.partial = net.id();
    r.situation = situation;
    r.reachable = net.to_set(situation.steps);

    Worklist work(net.transition_count(), opts.shuffle_seed);
    for (auto s : members(r.reachable))
        for (auto t : net.postset(s))
            work.push(t);
    // Source transitions are enabled in every situation.
    for (auto t : net.source_transitions())
        work.push(t);

    std::vector<std::size_t> grown;
    while (!work.empty()) {
        std::size_t t = work.pop();
        ++r.dequeues;
        grown.clear();

        const auto& up = net.upstream(t);
        bool enabled = std::all_of(up.begin(), up.end(), [&](std::size_t s) { return r.reachable.test(s); });
        if (enabled) {
            for (auto s : net.downstream(t)) {
                if (!r.reachable.test(s)) {
                    r.reachable.set(s);
                    for (auto next : net.postset(s))
                        work.push(next);
                }
                concurr_analysis(net, conc, t, s, source_seed, grown);
            }
        }
        for (auto s : grown)
            for (auto next : net.postset(s))
                work.push(next);
    }
    r.enqueues = work.enqueues();
    r.multi = net.empty_set();
    for (std::size_t s = 0; s < conc.size(); ++s) {
        if (conc[s].test(s)) {
            r.multi.set(s);
            conc[s].reset(s);
        }
    }
    r.concurrency = std::move(conc);
    return r;
}

}  // namespace

ReachConcResult reach_analysis(const PartialNet& net, const InitialSituation& situation, const ReachOptions& opts)
{
    StepSet initial = net.to_set(situation.steps);
    return run_fixpoint(net, situation, init_concurrency(net, initial), net.empty_set(), opts);
}

ReachConcResult source_transition_pass(const PartialNet& net, const InitialSituation& situation,
                                       const ReachConcResult& first_pass, const ReachOptions& opts)
{
    if (net.source_transitions().empty())
        return first_pass;

    const StepSet& reached = first_pass.reachable;
    ConcurrencyMap conc = init_concurrency(net, net.to_set(situation.steps));
    for (auto t : net.source_transitions()) {
        for (auto s : net.downstream(t)) {
            // Repeated firing may also put a second token on s.
            const StepSet& others = reached;
            conc[s] |= others;
            for (auto x : members(others))
                conc[x].set(s);
        }
    }
    ReachConcResult r = run_fixpoint(net, situation, std::move(conc), reached, opts);
    r.source_pass = true;
    return r;
}

ReachConcResult analyze_situation(const PartialNet& net, const InitialSituation& situation, const ReachOptions& opts)
{
    ReachConcResult first = reach_analysis(net, situation, opts);
    return source_transition_pass(net, situation, first, opts);
}

std::size_t worklist_bound(const PartialNet& net)
{
    std::size_t s = net.step_count();
    std::size_t t = net.transition_count();
    return t * (s * (s + 1) + 2);
}

PartialReach merge_situations(const PartialNet& net, const std::vector<ReachConcResult>& results)
{
    PartialReach out;
    out.partial = net.id();
    out.reachable = net.empty_set();
    out.multi = net.empty_set();
    out.concurrency.assign(net.step_count(), net.empty_set());
    for (const auto& r : results) {
        out.reachable |= r.reachable;
        out.multi |= r.multi;
        for (std::size_t s = 0; s < net.step_count(); ++s)
            out.concurrency[s] |= r.concurrency[s];
    }
    return out;
}

GlobalConcurrency::GlobalConcurrency(const GrafcetSpec& spec)
{
    for (const auto& p : spec.partials) {
        offsets_.push_back(names_.size());
        for (const auto& s : p.steps)
            names_.push_back(global_step_name(p.id, s.id));
    }
    rel_.assign(names_.size(), StepSet(names_.size()));
}

std::optional<std::size_t> GlobalConcurrency::index(std::string_view partial, std::string_view step) const
{
    return index(global_step_name(partial, step));
}

std::optional<std::size_t> GlobalConcurrency::index(std::string_view global_name) const
{
    for (std::size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == global_name)
            return i;
    return std::nullopt;
}

bool GlobalConcurrency::concurrent(std::string_view a, std::string_view b) const
{
    auto ia = index(a);
    auto ib = index(b);
    return ia && ib && concurrent(*ia, *ib);
}

bool GlobalConcurrency::add(std::size_t a, std::size_t b)
{
    if (a == b || rel_[a].test(b))
        return false;
    rel_[a].set(b);
    rel_[b].set(a);
    return true;
}

std::size_t GlobalConcurrency::pair_count() const
{
    std::size_t n = 0;
    for (const auto& r : rel_)
        n += r.count();
    return n / 2;
}

std::vector<std::pair<std::string, std::string>> GlobalConcurrency::pairs() const
{
    std::vector<std::pair<std::string, std::string>> out;
    for (std::size_t a = 0; a < rel_.size(); ++a)
        for (auto b = rel_[a].find_next(a); b != StepSet::npos; b = rel_[a].find_next(b))
            out.emplace_back(names_[a], names_[b]);
    return out;
}

GlobalConcurrency lift_hierarchy_concurrency(const GrafcetSpec& spec, const HierarchyGraph& graph,
                                             const std::vector<PartialReach>& partials)
{
    GlobalConcurrency g(spec);
    const std::size_t n = spec.partials.size();

    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t s = 0; s < partials[p].concurrency.size(); ++s)
            for (auto x : members(partials[p].concurrency[s]))
                g.add(g.offset(p) + s, g.offset(p) + x);

    // A partial is "enclosed-only" when it can only be active while one of its
    // enclosing steps is; every other live partial may run at any time.
    std::vector<bool> enclosed_only(n, false), free(n, false);
    for (std::size_t p = 0; p < n; ++p) {
        const auto& part = spec.partials[p];
        auto in = graph.incoming(part.id);
        bool has_initial = std::any_of(part.steps.begin(), part.steps.end(), [](const Step& s) { return s.initial; });
        bool all_enclosing = !in.empty() && std::all_of(in.begin(), in.end(), [](const HierarchyEdge* e) {
            return e->kind == HierarchyEdge::Kind::Enclosing;
        });
        enclosed_only[p] = !has_initial && all_enclosing;
        free[p] = !enclosed_only[p] && partials[p].reachable.any();
    }

    for (std::size_t a = 0; a < n; ++a) {
        if (!free[a])
            continue;
        for (std::size_t b = a + 1; b < n; ++b) {
            if (!free[b])
                continue;
            for (auto sa : members(partials[a].reachable))
                for (auto sb : members(partials[b].reachable))
                    g.add(g.offset(a) + sa, g.offset(b) + sb);
        }
    }

    std::vector<std::size_t> order;
    for (const auto& id : graph.order)
        if (auto i = spec.partial_index(id))
            order.push_back(*i);

    // Partials that can only run while `a` runs. Their steps reach the rows of
    // a's enclosers through a itself and must not be lifted back onto a.
    auto dependents = [&](std::size_t a) {
        std::vector<bool> dep(n, false);
        dep[a] = true;
        for (bool grew = true; grew;) {
            grew = false;
            for (std::size_t d = 0; d < n; ++d) {
                if (dep[d] || !enclosed_only[d])
                    continue;
                auto in = graph.incoming(spec.partials[d].id);
                bool inside = std::all_of(in.begin(), in.end(), [&](const HierarchyEdge* e) {
                    auto h = spec.partial_index(e->from);
                    return h && dep[*h];
                });
                if (inside)
                    dep[d] = grew = true;
            }
        }
        return dep;
    };
    std::vector<std::vector<bool>> dependent(n);
    for (std::size_t p = 0; p < n; ++p)
        if (enclosed_only[p])
            dependent[p] = dependents(p);
    std::vector<std::size_t> owner(g.size());
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t s = 0; s < spec.partials[p].steps.size(); ++s)
            owner[g.offset(p) + s] = p;

    bool changed = true;
    while (changed) {
        changed = false;
        for (auto a : order) {
            if (!enclosed_only[a])
                continue;
            const std::size_t lo = g.offset(a);
            for (const auto* e : graph.incoming(spec.partials[a].id)) {
                auto host = spec.partial_index(e->from);
                if (!host)
                    continue;
                auto hs = spec.partials[*host].step_index(e->step);
                if (!hs || !partials[*host].reachable.test(*hs))
                    continue;
                std::size_t enc = g.offset(*host) + *hs;
                for (auto s : members(partials[a].reachable))
                    changed |= g.add(lo + s, enc);
                StepSet context = g.row(enc);
                for (auto x = context.find_first(); x != StepSet::npos; x = context.find_next(x)) {
                    if (dependent[a][owner[x]])
                        continue;
                    for (auto s : members(partials[a].reachable))
                        changed |= g.add(lo + s, x);
                }
            }
        }
    }
    return g;
}

}  // namespace grafcet
