#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "grafcet/hierarchy.hpp"
#include "grafcet/net.hpp"

namespace grafcet {

// S^C_s for every step s of one partial Grafcet.
using ConcurrencyMap = std::vector<StepSet>;

struct ReachConcResult {
    std::string partial;
    InitialSituation situation;
    StepSet reachable;
    ConcurrencyMap concurrency;  // irreflexive
    StepSet multi;               // steps that may hold a second activity token
    std::size_t dequeues = 0;
    std::size_t enqueues = 0;
    bool source_pass = false;  // result of the second pass for source transitions
};

struct ReachOptions {
    // FIFO when unset; otherwise pending transitions are taken in a random
    // order drawn from this seed. The fixpoint does not depend on it.
    std::optional<std::uint64_t> shuffle_seed;
};

// All initially active steps are concurrent to each other.
ConcurrencyMap init_concurrency(const PartialNet& net, const StepSet& initial);

// One application of the concurrency update for transition t and s ∈ t•.
// `source_seed` replaces the intersection over the empty upstream of a
// source transition. Steps whose set grew are appended to `grown`. While the
// fixpoint runs, s ∈ conc[s] records that s may carry two tokens at once.
void concurr_analysis(const PartialNet& net, ConcurrencyMap& conc, std::size_t t, std::size_t s,
                      const StepSet& source_seed, std::vector<std::size_t>& grown);

// First pass of the reachable-step fixpoint from `situation`.
ReachConcResult reach_analysis(const PartialNet& net, const InitialSituation& situation, const ReachOptions& opts = {});

// Re-runs the fixpoint with the downstream steps of source transitions made
// concurrent to every step reachable in `first_pass`. Identity when the
// partial has no source transition.
ReachConcResult source_transition_pass(const PartialNet& net, const InitialSituation& situation,
                                       const ReachConcResult& first_pass, const ReachOptions& opts = {});

// Both passes.
ReachConcResult analyze_situation(const PartialNet& net, const InitialSituation& situation, const ReachOptions& opts = {});

// Upper bound on dequeues for a net of this size.
std::size_t worklist_bound(const PartialNet& net);

// Per-partial union over every initial situation.
struct PartialReach {
    std::string partial;
    StepSet reachable;
    ConcurrencyMap concurrency;  // irreflexive
    StepSet multi;               // steps that may hold a second activity token
};

PartialReach merge_situations(const PartialNet& net, const std::vector<ReachConcResult>& results);

// Step concurrency across the whole specification, over global step
// indices (partials in declaration order, steps in declaration order).
class GlobalConcurrency {
public:
    GlobalConcurrency() = default;
    explicit GlobalConcurrency(const GrafcetSpec& spec);

    std::size_t size() const { return names_.size(); }
    std::optional<std::size_t> index(std::string_view partial, std::string_view step) const;
    std::optional<std::size_t> index(std::string_view global_name) const;
    const std::string& name(std::size_t g) const { return names_[g]; }
    std::size_t offset(std::size_t partial) const { return offsets_[partial]; }

    bool concurrent(std::size_t a, std::size_t b) const { return rel_[a][b]; }
    bool concurrent(std::string_view a, std::string_view b) const;
    const StepSet& row(std::size_t g) const { return rel_[g]; }
    // Adds the pair in both directions unless a == b; true if it was new.
    bool add(std::size_t a, std::size_t b);
    std::size_t pair_count() const;
    std::vector<std::pair<std::string, std::string>> pairs() const;

private:
    std::vector<std::string> names_;
    std::vector<std::size_t> offsets_;
    std::vector<StepSet> rel_;
};

// Lifts per-partial concurrency across enclosings and forcings. Partials
// in `partials` are indexed like spec.partials.
GlobalConcurrency lift_hierarchy_concurrency(const GrafcetSpec& spec, const HierarchyGraph& graph,
                                             const std::vector<PartialReach>& partials);

}  // namespace grafcet
