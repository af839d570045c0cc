#include "grafcet/hierarchy.hpp"

#include <algorithm>
#include <map>

namespace grafcet {

std::vector<const HierarchyEdge*> HierarchyGraph::incoming(std::string_view partial) const
{
    std::vector<const HierarchyEdge*> out;
    for (const auto& e : edges)
        if (e.to == partial)
            out.push_back(&e);
    return out;
}

std::vector<const HierarchyEdge*> HierarchyGraph::outgoing(std::string_view partial) const
{
    std::vector<const HierarchyEdge*> out;
    for (const auto& e : edges)
        if (e.from == partial)
            out.push_back(&e);
    return out;
}

namespace {

// Returns a closed walk through some cycle, or empty.
std::vector<std::string> find_cycle(const std::vector<std::string>& nodes, const std::vector<std::vector<std::size_t>>& succ)
{
    enum class Color { White, Grey, Black };
    std::vector<Color> color(nodes.size(), Color::White);
    std::vector<std::size_t> stack;
    std::vector<std::string> cycle;

    auto dfs = [&](auto&& self, std::size_t u) -> bool {
        color[u] = Color::Grey;
        stack.push_back(u);
        for (auto v : succ[u]) {
            if (color[v] == Color::Grey) {
                auto it = std::find(stack.begin(), stack.end(), v);
                for (; it != stack.end(); ++it)
                    cycle.push_back(nodes[*it]);
                cycle.push_back(nodes[v]);
                return true;
            }
            if (color[v] == Color::White && self(self, v))
                return true;
        }
        stack.pop_back();
        color[u] = Color::Black;
        return false;
    };
    for (std::size_t u = 0; u < nodes.size(); ++u)
        if (color[u] == Color::White && dfs(dfs, u))
            return cycle;
    return {};
}

}  // namespace

HierarchyGraph build_hierarchy(const GrafcetSpec& spec)
{
    HierarchyGraph g;
    std::map<std::string, std::size_t> index;
    for (const auto& p : spec.partials) {
        index.emplace(p.id, g.nodes.size());
        g.nodes.push_back(p.id);
    }
    for (const auto& p : spec.partials) {
        for (const auto& e : p.enclosings) {
            HierarchyEdge edge;
            edge.kind = HierarchyEdge::Kind::Enclosing;
            edge.from = p.id;
            edge.step = e.step;
            edge.to = e.target;
            g.edges.push_back(std::move(edge));
        }
        for (const auto& a : p.actions) {
            const auto* f = std::get_if<ForcingAction>(&a);
            if (!f)
                continue;
            HierarchyEdge edge;
            edge.kind = HierarchyEdge::Kind::Forcing;
            edge.from = p.id;
            edge.step = f->step;
            edge.to = f->target;
            edge.situation = f->situation;
            edge.action = f->id;
            g.edges.push_back(std::move(edge));
        }
    }

    std::vector<std::vector<std::size_t>> succ(g.nodes.size());
    std::vector<std::size_t> indegree(g.nodes.size(), 0);
    for (const auto& e : g.edges) {
        auto from = index.find(e.from);
        auto to = index.find(e.to);
        if (from == index.end() || to == index.end())
            continue;
        succ[from->second].push_back(to->second);
        ++indegree[to->second];
    }

    // Kahn's algorithm, always picking the earliest declared ready node.
    std::vector<bool> done(g.nodes.size(), false);
    for (std::size_t round = 0; round < g.nodes.size(); ++round) {
        std::size_t pick = g.nodes.size();
        for (std::size_t u = 0; u < g.nodes.size(); ++u) {
            if (!done[u] && indegree[u] == 0) {
                pick = u;
                break;
            }
        }
        if (pick == g.nodes.size())
            break;
        done[pick] = true;
        g.order.push_back(g.nodes[pick]);
        for (auto v : succ[pick])
            --indegree[v];
    }
    if (g.order.size() != g.nodes.size()) {
        g.cycle = find_cycle(g.nodes, succ);
        g.order = g.nodes;
    }
    return g;
}

std::string InitialSituation::describe() const
{
    switch (source.kind) {
    case SituationSource::Kind::InitialSteps: return "initial steps";
    case SituationSource::Kind::Enclosing: return "enclosing step " + source.partial + "." + source.step;
    case SituationSource::Kind::Forcing:
        return std::string(source.forced_init ? "forcing (init) from " : "forcing from ") + source.partial + "." + source.step;
    case SituationSource::Kind::SourceTransitions: return "source transitions";
    }
    return {};
}

std::vector<InitialSituation> initial_situations(const GrafcetSpec& spec, const HierarchyGraph& graph,
                                                 std::string_view partial)
{
    std::vector<InitialSituation> out;
    const PartialGrafcet* p = spec.partial(partial);
    if (!p)
        return out;

    std::vector<std::string> initial, marked;
    for (const auto& s : p->steps) {
        if (s.initial)
            initial.push_back(s.id);
        if (s.marked)
            marked.push_back(s.id);
    }
    if (!initial.empty())
        out.push_back({p->id, {SituationSource::Kind::InitialSteps, {}, {}, false}, initial});

    for (const auto* e : graph.incoming(partial)) {
        if (e->kind == HierarchyEdge::Kind::Enclosing) {
            out.push_back({p->id, {SituationSource::Kind::Enclosing, e->from, e->step, false}, marked});
            continue;
        }
        switch (e->situation.kind) {
        case ForcedSituation::Kind::Steps:
            out.push_back({p->id, {SituationSource::Kind::Forcing, e->from, e->step, false}, e->situation.steps});
            break;
        case ForcedSituation::Kind::Init:
            out.push_back({p->id, {SituationSource::Kind::Forcing, e->from, e->step, true}, initial});
            break;
        case ForcedSituation::Kind::Current:
            break;
        }
    }

    bool has_source = std::any_of(p->transitions.begin(), p->transitions.end(),
                                  [](const Transition& t) { return t.upstream.empty(); });
    if (out.empty() && has_source)
        out.push_back({p->id, {SituationSource::Kind::SourceTransitions, {}, {}, false}, {}});
    return out;
}

std::vector<Finding> hierarchy_findings(const GrafcetSpec& spec, const HierarchyGraph& graph)
{
    std::vector<Finding> out;
    if (!graph.acyclic()) {
        Finding f;
        f.kind = FindingKind::HierarchyCycle;
        f.severity = Severity::Error;
        f.location = {graph.cycle.front(), {}};
        std::string walk;
        for (std::size_t i = 0; i < graph.cycle.size(); ++i)
            walk += (i ? " -> " : "") + graph.cycle[i];
        f.message = "hierarchy not a partial order: " + walk;
        f.evidence = {{"cycle", graph.cycle}};
        out.push_back(std::move(f));
    }
    for (const auto& p : spec.partials) {
        if (!initial_situations(spec, graph, p.id).empty())
            continue;
        Finding f;
        f.kind = FindingKind::DeadPartial;
        f.severity = Severity::Warning;
        f.location = {p.id, {}};
        f.message = "partial Grafcet '" + p.id + "' has no initial step, is never enclosed and never forced";
        out.push_back(std::move(f));
    }
    return out;
}

}  // namespace grafcet
