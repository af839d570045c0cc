// grafcet-lint: static analysis of GRAFCET specifications.
//
//   grafcet-lint analyze FILE [--format text|json] [--dump-invariants]
//                [--queries FILE] [--naive] [--fail-on warning|error]
//                [--oracle] [--no-timings] [--jobs N]
//
// Exit status: 0 when no finding reaches the --fail-on severity, 1 when one
// does, 2 on usage, I/O or parse errors.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "grafcet/ingest.hpp"
#include "grafcet/oracle.hpp"
#include "grafcet/pipeline.hpp"
#include "grafcet/report.hpp"

namespace {

struct Flags {
    std::string file;
    std::string format = "text";
    bool dump_invariants = false;
    std::string queries;
    bool naive = false;
    std::string fail_on = "warning";
    bool oracle = false;
    bool no_timings = false;
    unsigned jobs = 0;
};

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void print_ingest_error(const std::string& path, const grafcet::IngestError& e)
{
    std::cerr << path;
    if (e.line())
        std::cerr << ":" << e.line() << ":" << e.column();
    std::cerr << ": " << grafcet::to_string(e.kind()) << ": " << e.what();
    if (!e.path().empty())
        std::cerr << " (at " << e.path() << ")";
    std::cerr << "\n";
    for (const auto& f : e.findings())
        std::cerr << "  " << f.message << "\n";
}

int run_analyze(const Flags& flags)
{
    using namespace grafcet;

    GrafcetSpec spec;
    std::string current = flags.file;
    try {
        spec = parse_spec(read_file(flags.file));
        if (!flags.queries.empty()) {
            current = flags.queries;
            auto extra = parse_queries(read_file(flags.queries));
            spec.queries.insert(spec.queries.end(), extra.begin(), extra.end());
            auto problems = validate(spec);
            if (!problems.empty()) {
                std::cerr << flags.queries << ": invalid queries\n";
                for (const auto& f : problems)
                    std::cerr << "  " << f.message << "\n";
                return 2;
            }
        }
    } catch (const IngestError& e) {
        print_ingest_error(current, e);
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "grafcet-lint: " << e.what() << "\n";
        return 2;
    }

    Severity threshold = Severity::Warning;
    parse_severity(flags.fail_on, threshold);

    AnalysisOptions opts;
    opts.jobs = flags.jobs;
    opts.naive = flags.naive;
    AnalysisResult result = analyze(spec, opts);

    ReportOptions ropts;
    ropts.dump_invariants = flags.dump_invariants;
    ropts.timings = !flags.no_timings;

    std::optional<OracleFacts> facts;
    if (flags.oracle && result.valid)
        facts = explore(spec);

    if (flags.format == "json") {
        auto j = report_json(result, ropts);
        if (facts)
            j["oracle"] = oracle_json(*facts);
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << report_text(result, ropts);
        if (facts) {
            std::cout << "\noracle: " << facts->states << " states" << (facts->complete ? "" : " (incomplete: " + facts->incomplete_reason + ")")
                      << ", " << facts->reachable_steps.size() << " reachable steps, " << facts->concurrent_pairs.size()
                      << " concurrent pairs, " << facts->write_conflicts.size() << " write conflicts\n";
        }
    }

    for (const auto& f : result.findings)
        if (f.severity >= threshold)
            return 1;
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Static analyzer for GRAFCET control specifications"};
    app.set_version_flag("--version", std::string(grafcet::kToolVersion));
    app.require_subcommand(1);

    Flags flags;
    auto* analyze = app.add_subcommand("analyze", "Analyze a .grafcet.json specification");
    analyze->add_option("file", flags.file, "Specification file")->required();
    analyze->add_option("--format", flags.format, "Report format")->check(CLI::IsMember({"text", "json"}));
    analyze->add_flag("--dump-invariants", flags.dump_invariants, "Include incidence matrices and invariants");
    analyze->add_option("--queries", flags.queries, "Sidecar safety query file");
    analyze->add_flag("--naive", flags.naive, "Decide never-coactive queries from value sets only");
    analyze->add_option("--fail-on", flags.fail_on, "Lowest severity that makes the exit status 1")
        ->check(CLI::IsMember({"info", "warning", "error"}));
    analyze->add_flag("--oracle", flags.oracle, "Also run the explicit-state exploration (small specs only)");
    analyze->add_flag("--no-timings", flags.no_timings, "Omit wall-clock timings");
    analyze->add_option("--jobs", flags.jobs, "Worker threads (0: logical cores)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    return run_analyze(flags);
}
