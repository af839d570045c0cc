#include <doctest.h>

#include "generators.hpp"
#include "grafcet/ingest.hpp"
#include "grafcet/oracle.hpp"

using namespace grafcet;

namespace {

std::set<std::pair<std::string, std::string>> pairs_within(const OracleFacts& f, const std::string& partial)
{
    std::set<std::pair<std::string, std::string>> out;
    for (const auto& [a, b] : f.concurrent_pairs)
        if (a.rfind(partial + ".", 0) == 0 && b.rfind(partial + ".", 0) == 0)
            out.emplace(a.substr(partial.size() + 1), b.substr(partial.size() + 1));
    return out;
}

const std::set<std::pair<std::string, std::string>> kFig4Pairs = {
    {"s1", "s4"}, {"s1", "s5"}, {"s1", "s6"}, {"s2", "s4"}, {"s2", "s5"},
    {"s2", "s6"}, {"s3", "s4"}, {"s3", "s5"}, {"s3", "s6"}, {"s4", "s5"},
};

}  // namespace

TEST_CASE("Fig. 4 table, hand-executed")
{
    auto spec = testsupport::load_corpus("fig4.grafcet.json");
    auto facts = explore(spec);
    CHECK(facts.complete);
    CHECK(pairs_within(facts, "G") == kFig4Pairs);

    // The same net without its host, started directly from the situation.
    GrafcetSpec alone;
    alone.name = "alone";
    alone.variables = spec.variables;
    alone.partials = {*spec.partial("G")};
    OracleOptions opts;
    opts.initial_override["G"] = {"s3", "s4", "s5"};
    auto direct = explore(alone, opts);
    CHECK(pairs_within(direct, "G") == kFig4Pairs);
    CHECK(direct.reachable_steps.size() == 6);
}

TEST_CASE("Fig. 5 reaches its bound of four activations")
{
    auto spec = testsupport::load_corpus("fig5.grafcet.json");
    OracleOptions opts;
    opts.multiplicity_cap = 4;
    auto facts = explore(spec, opts);
    CHECK(facts.complete);
    CHECK_FALSE(facts.saturated);
    REQUIRE(facts.max_executions.count("G.inc"));
    CHECK(facts.max_executions["G.inc"] == std::optional<std::uint64_t>(4));
    CHECK(facts.values["k"] == std::set<std::int64_t>{0, 1, 2, 3, 4});
    CHECK(facts.max_activations["G.s5"] == std::optional<std::uint64_t>(4));
}

TEST_CASE("a multiplicity cap below the bound saturates")
{
    auto spec = testsupport::load_corpus("fig5.grafcet.json");
    OracleOptions opts;
    opts.multiplicity_cap = 1;
    auto facts = explore(spec, opts);
    CHECK(facts.saturated);
}

TEST_CASE("loops make executions unbounded")
{
    auto facts = explore(testsupport::load_corpus("g7_g8.grafcet.json"));
    CHECK(facts.complete);
    CHECK_FALSE(facts.max_executions["G7.a"].has_value());
    CHECK(facts.write_conflicts.count({"G7.a", "G8.b"}));
    CHECK(facts.values["v"] == std::set<std::int64_t>{0, 1, 2});
}

TEST_CASE("growing counters leave the value window")
{
    auto facts = explore(testsupport::load_corpus("g2.grafcet.json"));
    CHECK_FALSE(facts.complete);
    CHECK(facts.incomplete_reason.find("value window") != std::string::npos);
}

TEST_CASE("the state cap stops large explorations")
{
    OracleOptions opts;
    opts.state_cap = 50;
    auto facts = explore(testsupport::load_corpus("g_rit.grafcet.json"), opts);
    CHECK_FALSE(facts.complete);
    CHECK(facts.states <= 51);
}

TEST_CASE("enclosing activates marked steps and deactivation clears the partial")
{
    auto facts = explore(testsupport::load_corpus("fig1.grafcet.json"));
    CHECK(facts.complete);
    CHECK(facts.reachable_steps == std::set<std::string>{"G0.0", "G0.1", "G1.2", "G1.3"});
    CHECK_FALSE(facts.concurrent("G0.0", "G1.2"));
    CHECK(facts.concurrent("G0.1", "G1.2"));
    CHECK(facts.concurrent("G0.1", "G1.3"));
}

TEST_CASE("semantic mode respects conditions")
{
    auto spec = parse_spec(R"({"name": "s", "variables": [
        {"name": "go", "kind": "input", "type": "bool"},
        {"name": "n", "kind": "internal", "type": "int", "init": 0}],
      "partials": [{"id": "P", "steps": [{"id": "1", "initial": true}, {"id": "2"}, {"id": "3"}],
        "transitions": [{"id": "a", "from": ["1"], "to": ["2"], "cond": "go"},
                        {"id": "b", "from": ["2"], "to": ["3"], "cond": "n > 5"}]}]})");
    OracleOptions semantic;
    semantic.mode = OracleOptions::Mode::Semantic;
    auto facts = explore(spec, semantic);
    CHECK(facts.complete);
    CHECK(facts.reachable_steps == std::set<std::string>{"P.1", "P.2"});
    CHECK(facts.satisfiable_conditions.count("P.a"));
    CHECK_FALSE(facts.satisfiable_conditions.count("P.b"));

    auto structural = explore(spec);
    CHECK(structural.reachable_steps.count("P.3"));
}

TEST_CASE("source transitions keep injecting activity")
{
    OracleOptions opts;
    opts.multiplicity_cap = 2;
    auto facts = explore(testsupport::load_corpus("g5.grafcet.json"), opts);
    CHECK(facts.saturated);
    CHECK(facts.reachable_steps == std::set<std::string>{"G5.1", "G5.2"});
    CHECK(facts.concurrent("G5.1", "G5.2"));
    CHECK_FALSE(facts.max_activations["G5.1"].has_value());
}

TEST_CASE("simultaneous firing reaches a marking no single firing does")
{
    // Each transition disables the other, so only firing both at once
    // reaches {3, 4}.
    auto spec = parse_spec(R"({"name": "swap", "variables": [], "partials": [{"id": "G",
        "steps": [{"id": "1", "initial": true}, {"id": "2", "initial": true}, {"id": "3"}, {"id": "4"}],
        "transitions": [
            {"id": "t1", "from": ["1"], "to": ["3"], "cond": "X2"},
            {"id": "t2", "from": ["2"], "to": ["4"], "cond": "X1"}],
        "actions": []}]})");
    OracleOptions opts;
    opts.mode = OracleOptions::Mode::Semantic;
    auto both = explore(spec, opts);
    CHECK(both.concurrent("G.3", "G.4"));

    opts.simultaneous = false;
    auto single = explore(spec, opts);
    CHECK(single.concurrent("G.1", "G.4"));
    CHECK_FALSE(single.concurrent("G.3", "G.4"));
}
