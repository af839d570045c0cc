#include <doctest.h>

#include <random>

#include "generators.hpp"
#include "grafcet/ingest.hpp"

using namespace grafcet;
using nlohmann::json;

namespace {

const char* kMinimal = R"({
  "name": "m",
  "variables": [
    {"name": "go", "kind": "input", "type": "bool"},
    {"name": "n", "kind": "internal", "type": "int", "init": 2},
    {"name": "lamp", "kind": "output", "type": "bool"}
  ],
  "partials": [{
    "id": "P",
    "steps": [{"id": "1", "initial": true}, {"id": "2"}],
    "transitions": [{"id": "t1", "from": ["1"], "to": ["2"], "cond": "go"},
                    {"id": "t2", "from": ["2"], "to": ["1"]}],
    "actions": [{"kind": "continuous", "step": "2", "var": "lamp"},
                {"kind": "stored", "id": "inc", "step": "2", "var": "n", "value": "n + 1", "trigger": "activation"}]
  }]
})";

IngestError::Kind error_kind(const std::string& doc)
{
    try {
        parse_spec(doc);
    } catch (const IngestError& e) {
        return e.kind();
    }
    FAIL("document was accepted");
    return IngestError::Kind::Syntax;
}

json minimal()
{
    return json::parse(kMinimal);
}

}  // namespace

TEST_CASE("minimal document")
{
    auto spec = parse_spec(kMinimal);
    CHECK(spec.name == "m");
    REQUIRE(spec.partials.size() == 1);
    const auto& p = spec.partials[0];
    CHECK(p.steps[0].initial);
    CHECK(p.transitions[1].condition.is_true_literal());
    REQUIRE(p.actions.size() == 2);
    CHECK(std::holds_alternative<ContinuousAction>(p.actions[0]));
    CHECK_FALSE(action_id(p.actions[0]).empty());
    CHECK(action_id(p.actions[1]) == "inc");
    CHECK(spec.variable("n")->initial_value() == 2);
}

TEST_CASE("serialization round-trips the corpus")
{
    for (const char* name : {"g1", "g2", "g3", "g4", "g5", "g6", "g7_g8", "fig1", "fig4", "fig5", "g_rit"}) {
        CAPTURE(name);
        auto spec = testsupport::load_corpus(std::string(name) + ".grafcet.json");
        auto again = parse_spec(serialize_spec(spec));
        CHECK(again == spec);
        CHECK(serialize_spec(again) == serialize_spec(spec));
    }
}

TEST_CASE("syntax errors carry line and column")
{
    try {
        parse_spec("{\n  \"name\": \"x\",\n  oops\n}");
        FAIL("accepted");
    } catch (const IngestError& e) {
        CHECK(e.kind() == IngestError::Kind::Syntax);
        CHECK(e.line() == 3);
        CHECK(e.column() > 0);
    }
}

TEST_CASE("schema errors name the offending path")
{
    auto doc = minimal();
    doc["partials"][0]["steps"][0]["id"] = 7;
    try {
        parse_spec(doc.dump());
        FAIL("accepted");
    } catch (const IngestError& e) {
        CHECK(e.kind() == IngestError::Kind::Schema);
        CHECK(e.path().find("/partials/0/steps/0") == 0);
    }

    doc = minimal();
    doc["partials"][0]["colour"] = "red";
    CHECK(error_kind(doc.dump()) == IngestError::Kind::Schema);

    doc = minimal();
    doc["variables"][0]["kind"] = "sensor";
    CHECK(error_kind(doc.dump()) == IngestError::Kind::Schema);

    doc = minimal();
    doc["partials"][0]["actions"][1]["trigger"] = "sometimes";
    CHECK(error_kind(doc.dump()) == IngestError::Kind::Schema);

    doc = minimal();
    doc.erase("partials");
    CHECK(error_kind(doc.dump()) == IngestError::Kind::Schema);
}

TEST_CASE("semantic errors are rejected with findings")
{
    struct Case {
        const char* what;
        std::function<void(json&)> edit;
    };
    std::vector<Case> cases = {
        {"unknown step in transition", [](json& d) { d["partials"][0]["transitions"][0]["to"] = {"9"}; }},
        {"duplicate step", [](json& d) { d["partials"][0]["steps"].push_back({{"id", "1"}}); }},
        {"empty transition", [](json& d) {
             d["partials"][0]["transitions"][0]["from"] = json::array();
             d["partials"][0]["transitions"][0]["to"] = json::array();
         }},
        {"undeclared variable in condition", [](json& d) { d["partials"][0]["transitions"][0]["cond"] = "stop"; }},
        {"integer condition", [](json& d) { d["partials"][0]["transitions"][0]["cond"] = "n + 1"; }},
        {"stored write to input", [](json& d) { d["partials"][0]["actions"][1]["var"] = "go"; }},
        {"continuous write to internal", [](json& d) { d["partials"][0]["actions"][0]["var"] = "n"; }},
        {"input with init", [](json& d) { d["variables"][0]["init"] = 1; }},
        {"Boolean init out of range", [](json& d) { d["variables"][2]["init"] = 3; }},
        {"duplicate variable", [](json& d) { d["variables"].push_back(d["variables"][0]); }},
        {"enclosing unknown target", [](json& d) {
             d["partials"][0]["enclosings"] = json::array({{{"step", "1"}, {"target", "Q"}}});
         }},
        {"self enclosing", [](json& d) {
             d["partials"][0]["enclosings"] = json::array({{{"step", "1"}, {"target", "P"}}});
         }},
        {"forcing unknown step", [](json& d) {
             d["partials"].push_back({{"id", "Q"}, {"steps", {{{"id", "a"}}}}, {"transitions", json::array()}});
             d["partials"][0]["actions"].push_back(
                 {{"kind", "forcing"}, {"step", "1"}, {"target", "Q"}, {"situation", {"b"}}});
         }},
        {"action on unknown step", [](json& d) { d["partials"][0]["actions"][0]["step"] = "5"; }},
        {"query with unknown step", [](json& d) {
             d["queries"] = json::array({{{"name", "q"}, {"kind", "never-concurrent"}, {"a", "P.1"}, {"b", "P.7"}}});
         }},
    };
    for (const auto& c : cases) {
        std::string what = c.what;
        CAPTURE(what);
        auto doc = minimal();
        c.edit(doc);
        try {
            parse_spec(doc.dump());
            FAIL("accepted");
        } catch (const IngestError& e) {
            CAPTURE(e.what());
            CHECK((e.kind() == IngestError::Kind::Semantic || e.kind() == IngestError::Kind::Schema));
        }
    }
}

TEST_CASE("validate reports every problem of a hand-built model")
{
    GrafcetSpec s;
    s.variables = {{"x", VarKind::Internal, VarType::Int, 0}, {"x", VarKind::Internal, VarType::Int, 0}};
    PartialGrafcet p;
    p.id = "P";
    p.steps = {{"1", true, false}};
    p.transitions.push_back({"t", {}, {}, Expr::boolean(true)});
    s.partials = {p, p};
    auto f = validate(s);
    CHECK(f.size() >= 3);
    for (const auto& x : f) {
        CHECK(x.kind == FindingKind::InvalidModel);
        CHECK(x.severity == Severity::Error);
    }
}

TEST_CASE("sidecar query files")
{
    auto qs = parse_queries(R"([{"name": "a", "kind": "never-concurrent", "a": "P.1", "b": "P.2"}])");
    REQUIRE(qs.size() == 1);
    CHECK(qs[0].kind == SafetyQuery::Kind::NeverConcurrent);
    CHECK(qs[0].step_b == "P.2");

    qs = parse_queries(R"({"queries": [{"name": "b", "kind": "never-coactive",
                          "a": {"var": "lamp", "value": true}, "b": {"var": "n", "value": 3}}]})");
    REQUIRE(qs.size() == 1);
    CHECK(qs[0].kind == SafetyQuery::Kind::NeverCoactive);
    CHECK(qs[0].lit_a.value == 1);
    CHECK(qs[0].lit_b.value == 3);

    CHECK_THROWS_AS(parse_queries(R"([{"name": "c", "kind": "sometimes"}])"), IngestError);
    CHECK_THROWS_AS(parse_queries("[1, 2"), IngestError);
}

TEST_CASE("random specifications survive a round trip")
{
    std::mt19937_64 rng(7);
    for (int i = 0; i < 100; ++i) {
        auto spec = testsupport::random_spec(rng);
        CHECK(parse_spec(serialize_spec(spec)) == spec);
    }
}

TEST_CASE("mutated documents never crash the parser")
{
    std::mt19937_64 rng(11);
    const std::string base = kMinimal;
    const std::string alphabet = "{}[]\":,.!&|()01aXtrue-+ \n";
    int accepted = 0, rejected = 0;
    for (int i = 0; i < 2000; ++i) {
        std::string doc = base;
        int edits = std::uniform_int_distribution<int>(1, 4)(rng);
        for (int e = 0; e < edits; ++e) {
            std::size_t at = std::uniform_int_distribution<std::size_t>(0, doc.size() - 1)(rng);
            char c = alphabet[std::uniform_int_distribution<std::size_t>(0, alphabet.size() - 1)(rng)];
            switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
            case 0: doc[at] = c; break;
            case 1: doc.insert(doc.begin() + static_cast<long>(at), c); break;
            default: doc.erase(at, 1); break;
            }
        }
        try {
            auto spec = parse_spec(doc);
            CHECK(parse_spec(serialize_spec(spec)) == spec);
            ++accepted;
        } catch (const IngestError&) {
            ++rejected;
        }
    }
    CHECK(accepted + rejected == 2000);
    CHECK(rejected > 0);
}
