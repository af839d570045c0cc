#include "grafcet/net.hpp"

namespace grafcet {

std::vector<std::size_t> members(const StepSet& s)
{
    std::vector<std::size_t> out;
    out.reserve(s.count());
    for (auto i = s.find_first(); i != StepSet::npos; i = s.find_next(i))
        out.push_back(i);
    return out;
}

PartialNet::PartialNet(const PartialGrafcet& partial)
    : id_(partial.id),
      upstream_(partial.transitions.size()),
      downstream_(partial.transitions.size()),
      preset_(partial.steps.size()),
      postset_(partial.steps.size()),
      initial_(partial.steps.size()),
      marked_(partial.steps.size())
{
    for (std::size_t i = 0; i < partial.steps.size(); ++i) {
        steps_.push_back(partial.steps[i].id);
        initial_[i] = partial.steps[i].initial;
        marked_[i] = partial.steps[i].marked;
    }
    for (std::size_t t = 0; t < partial.transitions.size(); ++t) {
        const auto& tr = partial.transitions[t];
        transitions_.push_back(tr.id);
        for (const auto& s : tr.upstream) {
            if (auto i = step_index(s)) {
                upstream_[t].push_back(*i);
                postset_[*i].push_back(t);
            }
        }
        for (const auto& s : tr.downstream) {
            if (auto i = step_index(s)) {
                downstream_[t].push_back(*i);
                preset_[*i].push_back(t);
            }
        }
        if (upstream_[t].empty())
            sources_.push_back(t);
    }
}

std::optional<std::size_t> PartialNet::step_index(std::string_view id) const
{
    for (std::size_t i = 0; i < steps_.size(); ++i)
        if (steps_[i] == id)
            return i;
    return std::nullopt;
}

StepSet PartialNet::to_set(const std::vector<std::string>& step_ids) const
{
    StepSet out = empty_set();
    for (const auto& s : step_ids)
        if (auto i = step_index(s))
            out.set(*i);
    return out;
}

std::vector<std::string> PartialNet::names(const StepSet& s) const
{
    std::vector<std::string> out;
    for (auto i : members(s))
        out.push_back(steps_[i]);
    return out;
}

}  // namespace grafcet
