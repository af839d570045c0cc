#include "grafcet/report.hpp"

#include <cstdio>
#include <sstream>

#include "grafcet/ingest.hpp"

namespace grafcet {

std::string spec_digest(const GrafcetSpec& spec)
{
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : serialize_spec(spec)) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

nlohmann::json integer_json(const Integer& v)
{
    if (v <= std::numeric_limits<std::int64_t>::max() && v >= std::numeric_limits<std::int64_t>::min())
        return v.convert_to<std::int64_t>();
    return v.str();
}

nlohmann::json count_json(const Count& c)
{
    if (c.is_infinite())
        return "inf";
    return c.value();
}

nlohmann::json names_json(const PartialNet& net, const StepSet& s)
{
    return net.names(s);
}

nlohmann::json concurrency_json(const PartialNet& net, const ConcurrencyMap& conc)
{
    nlohmann::json out = nlohmann::json::object();
    for (std::size_t s = 0; s < conc.size(); ++s)
        out[net.step_id(s)] = net.names(conc[s]);
    return out;
}

std::string_view situation_kind(SituationSource::Kind k)
{
    switch (k) {
    case SituationSource::Kind::InitialSteps: return "initial-steps";
    case SituationSource::Kind::Enclosing: return "enclosing";
    case SituationSource::Kind::Forcing: return "forcing";
    case SituationSource::Kind::SourceTransitions: return "source-transitions";
    }
    return "";
}

nlohmann::json vectors_json(const std::vector<IntVector>& vs, const std::vector<std::string>& names)
{
    nlohmann::json out = nlohmann::json::array();
    for (const auto& v : vs) {
        nlohmann::json entries = nlohmann::json::array();
        nlohmann::json support = nlohmann::json::object();
        for (std::size_t i = 0; i < v.size(); ++i) {
            entries.push_back(integer_json(v[i]));
            if (v[i] != 0)
                support[names[i]] = integer_json(v[i]);
        }
        out.push_back({{"vector", entries}, {"support", support}});
    }
    return out;
}

nlohmann::json variable_json(const VarApprox& v)
{
    nlohmann::json j = {{"kind", to_string(v.kind)}, {"type", to_string(v.type)}};
    if (v.type == VarType::Int) {
        j["lo"] = v.range.lo ? nlohmann::json(*v.range.lo) : nlohmann::json("-inf");
        j["hi"] = v.range.hi ? nlohmann::json(*v.range.hi) : nlohmann::json("+inf");
    } else {
        nlohmann::json values = nlohmann::json::array();
        if (v.values.can_false)
            values.push_back(false);
        if (v.values.can_true)
            values.push_back(true);
        j["values"] = values;
    }
    j["writers"] = v.writers;
    return j;
}

}  // namespace

nlohmann::json report_json(const AnalysisResult& r, const ReportOptions& opts)
{
    nlohmann::json j;
    j["schema"] = kReportSchema;
    j["tool_version"] = kToolVersion;
    j["spec"] = {{"name", r.spec.name}, {"digest", spec_digest(r.spec)}};
    j["valid"] = r.valid;

    if (r.valid) {
        nlohmann::json hierarchy;
        hierarchy["acyclic"] = r.hierarchy.acyclic();
        hierarchy["order"] = r.hierarchy.order;
        hierarchy["edges"] = nlohmann::json::array();
        for (const auto& e : r.hierarchy.edges)
            hierarchy["edges"].push_back({{"kind", e.kind == HierarchyEdge::Kind::Enclosing ? "enclosing" : "forcing"},
                                          {"from", e.from},
                                          {"step", e.step},
                                          {"to", e.to}});
        if (!r.hierarchy.acyclic())
            hierarchy["cycle"] = r.hierarchy.cycle;
        j["hierarchy"] = hierarchy;

        nlohmann::json partials = nlohmann::json::array();
        for (const auto& pa : r.partials) {
            const auto& net = pa.net;
            nlohmann::json p;
            p["id"] = net.id();
            nlohmann::json situations = nlohmann::json::array();
            for (const auto& s : pa.situations) {
                situations.push_back({{"source", s.situation.describe()},
                                      {"kind", situation_kind(s.situation.source.kind)},
                                      {"initial", s.situation.steps},
                                      {"reachable", names_json(net, s.reachable)},
                                      {"concurrency", concurrency_json(net, s.concurrency)},
                                      {"worklist", {{"dequeues", s.dequeues}, {"enqueues", s.enqueues}}}});
            }
            p["situations"] = situations;
            p["reachable"] = names_json(net, pa.merged.reachable);
            p["concurrency"] = concurrency_json(net, pa.merged.concurrency);

            const auto& b = pa.invariants.boundedness;
            nlohmann::json step_bounds = nlohmann::json::object();
            for (std::size_t s = 0; s < net.step_count(); ++s)
                step_bounds[net.step_id(s)] = b.step_bound[s] ? integer_json(*b.step_bound[s]) : nlohmann::json("inf");
            nlohmann::json uncovered = nlohmann::json::array();
            for (auto s : b.uncovered)
                uncovered.push_back(net.step_id(s));
            p["boundedness"] = {{"covered", b.covered},
                                {"n", b.bound ? integer_json(*b.bound) : nlohmann::json("inf")},
                                {"step_bounds", step_bounds},
                                {"uncovered", uncovered},
                                {"complete", pa.invariants.complete()}};
            if (opts.dump_invariants) {
                const auto& m = pa.invariants.matrix;
                p["invariants"] = {
                    {"matrix", {{"steps", m.steps}, {"transitions", m.transitions}, {"entries", m.entries}}},
                    {"s", vectors_json(pa.invariants.s.vectors, m.steps)},
                    {"t", vectors_json(pa.invariants.t.vectors, m.transitions)},
                    {"complete", pa.invariants.complete()},
                };
            }
            partials.push_back(std::move(p));
        }
        j["partials"] = partials;

        nlohmann::json pairs = nlohmann::json::array();
        for (const auto& [a, b] : r.concurrency.pairs())
            pairs.push_back({a, b});
        j["concurrency"] = pairs;

        nlohmann::json executions = nlohmann::json::array();
        for (const auto& e : r.bounds.actions)
            executions.push_back({{"action", global_step_name(e.partial, e.action)},
                                  {"step", global_step_name(e.partial, e.step)},
                                  {"count", count_json(e.count)},
                                  {"reasons", e.reasons}});
        j["executions"] = executions;

        nlohmann::json vars = nlohmann::json::object();
        for (const auto& v : r.variables)
            vars[v.name] = variable_json(v);
        j["variables"] = vars;
    }

    nlohmann::json findings = nlohmann::json::array();
    std::size_t counts[3] = {0, 0, 0};
    for (const auto& f : r.findings) {
        findings.push_back(to_json(f));
        ++counts[static_cast<int>(f.severity)];
    }
    j["findings"] = findings;
    j["summary"] = {{"errors", counts[2]}, {"warnings", counts[1]}, {"infos", counts[0]}};

    if (opts.timings) {
        nlohmann::json t = nlohmann::json::object();
        double total = 0;
        for (const auto& p : r.timings) {
            t[p.phase] = p.ms;
            total += p.ms;
        }
        t["total"] = total;
        j["timings_ms"] = t;
    }
    return j;
}

namespace {

std::string join(const std::vector<std::string>& items, const char* sep = " ")
{
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i)
        out += (i ? sep : "") + items[i];
    return out;
}

std::string vector_text(const IntVector& v)
{
    std::string out = "(";
    for (std::size_t i = 0; i < v.size(); ++i)
        out += (i ? "," : "") + v[i].str();
    return out + ")";
}

}  // namespace

std::string report_text(const AnalysisResult& r, const ReportOptions& opts)
{
    std::ostringstream os;
    os << "grafcet-lint " << kToolVersion << ": " << (r.spec.name.empty() ? "(unnamed)" : r.spec.name) << " ["
       << spec_digest(r.spec) << "]\n";

    if (r.valid) {
        for (const auto& pa : r.partials) {
            const auto& net = pa.net;
            os << "\npartial " << net.id() << ": " << net.step_count() << " steps, " << net.transition_count()
               << " transitions, " << pa.situations.size() << " initial situation(s)\n";
            for (const auto& s : pa.situations)
                os << "  situation from " << s.situation.describe() << ": {" << join(s.situation.steps, ", ") << "}\n";
            os << "  reachable: " << join(net.names(pa.merged.reachable)) << "\n";
            for (std::size_t s = 0; s < net.step_count(); ++s)
                if (pa.merged.concurrency[s].any())
                    os << "  S^C(" << net.step_id(s) << ") = {" << join(net.names(pa.merged.concurrency[s]), ", ") << "}\n";
            const auto& b = pa.invariants.boundedness;
            if (b.covered) {
                os << "  covered by S-invariants, n = " << b.bound->str() << "\n";
            } else {
                std::vector<std::string> uncovered;
                for (auto s : b.uncovered)
                    uncovered.push_back(net.step_id(s));
                os << "  not covered by S-invariants; uncovered: " << join(uncovered) << "\n";
            }
            if (opts.dump_invariants) {
                os << "  steps (" << join(pa.invariants.matrix.steps, ",") << "), transitions ("
                   << join(pa.invariants.matrix.transitions, ",") << ")\n";
                for (const auto& y : pa.invariants.s.vectors)
                    os << "  S-invariant " << vector_text(y) << "\n";
                for (const auto& x : pa.invariants.t.vectors)
                    os << "  T-invariant " << vector_text(x) << "\n";
                if (!pa.invariants.complete())
                    os << "  (invariant enumeration incomplete)\n";
            }
        }

        os << "\nconcurrent step pairs: " << r.concurrency.pair_count() << "\n";
        if (!r.bounds.actions.empty()) {
            os << "\nexecution bounds:\n";
            for (const auto& e : r.bounds.actions)
                os << "  " << global_step_name(e.partial, e.action) << " at " << e.step << ": " << e.count.str() << " ("
                   << join(e.reasons, ", ") << ")\n";
        }
        if (!r.variables.empty()) {
            os << "\nvariables:\n";
            for (const auto& v : r.variables)
                os << "  " << v.name << " (" << to_string(v.kind) << " " << to_string(v.type)
                   << "): " << (v.type == VarType::Int ? to_string(v.range) : to_string(v.values)) << "\n";
        }
    }

    std::size_t counts[3] = {0, 0, 0};
    os << "\nfindings:\n";
    if (r.findings.empty())
        os << "  none\n";
    for (const auto& f : r.findings) {
        ++counts[static_cast<int>(f.severity)];
        std::string where = f.location.partial.empty() ? f.location.element
                                                       : global_step_name(f.location.partial, f.location.element);
        os << "  " << to_string(f.severity) << " " << to_string(f.kind) << " " << where << ": " << f.message << " ["
           << f.id() << "]\n";
    }
    os << "\nsummary: " << counts[2] << " error(s), " << counts[1] << " warning(s), " << counts[0] << " info\n";
    if (opts.timings) {
        double total = 0;
        os << "timings (ms):";
        for (const auto& p : r.timings) {
            char buf[64];
            std::snprintf(buf, sizeof buf, " %s=%.3f", p.phase.c_str(), p.ms);
            os << buf;
            total += p.ms;
        }
        char buf[64];
        std::snprintf(buf, sizeof buf, " total=%.3f\n", total);
        os << buf;
    }
    return os.str();
}

nlohmann::json oracle_json(const OracleFacts& facts)
{
    nlohmann::json j;
    j["complete"] = facts.complete;
    if (!facts.complete)
        j["incomplete_reason"] = facts.incomplete_reason;
    j["saturated"] = facts.saturated;
    j["states"] = facts.states;
    j["reachable_steps"] = facts.reachable_steps;
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& [a, b] : facts.concurrent_pairs)
        pairs.push_back({a, b});
    j["concurrent_pairs"] = pairs;
    nlohmann::json values = nlohmann::json::object();
    for (const auto& [k, v] : facts.values)
        values[k] = v;
    j["values"] = values;
    nlohmann::json conflicts = nlohmann::json::array();
    for (const auto& [a, b] : facts.write_conflicts)
        conflicts.push_back({a, b});
    j["write_conflicts"] = conflicts;
    nlohmann::json exec = nlohmann::json::object();
    for (const auto& [k, v] : facts.max_executions)
        exec[k] = v ? nlohmann::json(*v) : nlohmann::json("inf");
    j["max_executions"] = exec;
    return j;
}

}  // namespace grafcet
