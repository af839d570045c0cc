#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "grafcet/model.hpp"

namespace grafcet {

using StepSet = boost::dynamic_bitset<>;

std::vector<std::size_t> members(const StepSet& s);

// Index-based view of the step/transition structure of one partial Grafcet.
// Hierarchy and actions are not part of the net.
class PartialNet {
public:
    explicit PartialNet(const PartialGrafcet& partial);

    const std::string& id() const { return id_; }
    std::size_t step_count() const { return steps_.size(); }
    std::size_t transition_count() const { return transitions_.size(); }

    const std::string& step_id(std::size_t s) const { return steps_[s]; }
    const std::string& transition_id(std::size_t t) const { return transitions_[t]; }
    std::optional<std::size_t> step_index(std::string_view id) const;

    // •t and t•
    const std::vector<std::size_t>& upstream(std::size_t t) const { return upstream_[t]; }
    const std::vector<std::size_t>& downstream(std::size_t t) const { return downstream_[t]; }
    // •s and s•
    const std::vector<std::size_t>& preset(std::size_t s) const { return preset_[s]; }
    const std::vector<std::size_t>& postset(std::size_t s) const { return postset_[s]; }

    const std::vector<std::size_t>& source_transitions() const { return sources_; }
    const StepSet& initial_steps() const { return initial_; }
    const StepSet& marked_steps() const { return marked_; }

    StepSet empty_set() const { return StepSet(steps_.size()); }
    StepSet to_set(const std::vector<std::string>& step_ids) const;
    std::vector<std::string> names(const StepSet& s) const;

private:
    std::string id_;
    std::vector<std::string> steps_;
    std::vector<std::string> transitions_;
    std::vector<std::vector<std::size_t>> upstream_, downstream_, preset_, postset_;
    std::vector<std::size_t> sources_;
    StepSet initial_, marked_;
};

}  // namespace grafcet
