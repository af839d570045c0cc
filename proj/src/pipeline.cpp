#include "grafcet/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <functional>
#include <thread>

namespace grafcet {

const PartialAnalysis* AnalysisResult::partial(std::string_view id) const
{
    auto i = spec.partial_index(id);
    return i && *i < partials.size() ? &partials[*i] : nullptr;
}

const VarApprox* AnalysisResult::variable(std::string_view name) const
{
    for (const auto& v : variables)
        if (v.name == name)
            return &v;
    return nullptr;
}

std::size_t AnalysisResult::count(FindingKind kind) const
{
    return static_cast<std::size_t>(
        std::count_if(findings.begin(), findings.end(), [&](const Finding& f) { return f.kind == kind; }));
}

Severity AnalysisResult::max_severity() const
{
    Severity s = Severity::Info;
    for (const auto& f : findings)
        s = std::max(s, f.severity);
    return s;
}

namespace {

// Runs tasks[0..n) on up to `jobs` threads.
void run_parallel(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& task)
{
    if (jobs == 0)
        jobs = std::max(1u, std::thread::hardware_concurrency());
    jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, n));
    if (jobs <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            task(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    for (unsigned w = 0; w < jobs; ++w)
        workers.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++)
                task(i);
        });
    for (auto& w : workers)
        w.join();
}

class PhaseClock {
public:
    explicit PhaseClock(std::vector<PhaseTiming>& out) : out_(out), start_(std::chrono::steady_clock::now()) {}

    void lap(const char* phase)
    {
        auto now = std::chrono::steady_clock::now();
        out_.push_back({phase, std::chrono::duration<double, std::milli>(now - start_).count()});
        start_ = now;
    }

private:
    std::vector<PhaseTiming>& out_;
    std::chrono::steady_clock::time_point start_;
};

void append(std::vector<Finding>& to, std::vector<Finding> from)
{
    to.insert(to.end(), std::make_move_iterator(from.begin()), std::make_move_iterator(from.end()));
}

}  // namespace

AnalysisResult analyze(const GrafcetSpec& spec, const AnalysisOptions& opts)
{
    AnalysisResult r;
    r.spec = spec;
    PhaseClock clock(r.timings);

    r.findings = validate(r.spec);
    if (std::any_of(r.findings.begin(), r.findings.end(), [](const Finding& f) { return f.severity == Severity::Error; })) {
        r.valid = false;
        sort_findings(r.findings);
        return r;
    }
    clock.lap("validate");

    r.hierarchy = build_hierarchy(r.spec);
    append(r.findings, hierarchy_findings(r.spec, r.hierarchy));
    clock.lap("hierarchy");

    const std::size_t n = r.spec.partials.size();
    r.partials.reserve(n);
    for (const auto& p : r.spec.partials)
        r.partials.emplace_back(p);

    struct Task {
        std::size_t partial;
        InitialSituation situation;
    };
    std::vector<Task> tasks;
    for (std::size_t p = 0; p < n; ++p)
        for (auto& s : initial_situations(r.spec, r.hierarchy, r.spec.partials[p].id))
            tasks.push_back({p, std::move(s)});
    std::vector<ReachConcResult> results(tasks.size());
    run_parallel(tasks.size(), opts.jobs, [&](std::size_t i) {
        results[i] = analyze_situation(r.partials[tasks[i].partial].net, tasks[i].situation, opts.reach);
    });
    for (std::size_t i = 0; i < tasks.size(); ++i)
        r.partials[tasks[i].partial].situations.push_back(std::move(results[i]));
    for (auto& pa : r.partials)
        pa.merged = merge_situations(pa.net, pa.situations);
    clock.lap("reachconc");

    run_parallel(n, opts.jobs, [&](std::size_t p) {
        r.partials[p].invariants = compute_invariants(r.partials[p].net, opts.invariants);
    });
    clock.lap("invariants");

    std::vector<PartialReach> merged;
    for (const auto& pa : r.partials)
        merged.push_back(pa.merged);
    r.concurrency = lift_hierarchy_concurrency(r.spec, r.hierarchy, merged);
    clock.lap("lift");

    r.bounds = bound_executions(r.spec, r.hierarchy, r.partials);
    r.variables = approximate_variables(r.spec, r.bounds, r.partials);
    clock.lap("varapprox");

    AbstractEnv env(r.spec, r.variables, r.partials);
    append(r.findings, structural_findings(r.spec, r.hierarchy, r.partials));
    append(r.findings, detect_races(r.spec, r.concurrency));
    append(r.findings, check_conditions(r.spec, env));
    std::vector<SafetyQuery> queries = r.spec.queries;
    queries.insert(queries.end(), opts.extra_queries.begin(), opts.extra_queries.end());
    append(r.findings, run_queries(r.spec, queries, r.concurrency, env, {opts.naive}));
    sort_findings(r.findings);
    clock.lap("checks");
    return r;
}

}  // namespace grafcet
