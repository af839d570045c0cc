#include <doctest.h>

#include "generators.hpp"
#include "grafcet/hierarchy.hpp"
#include "grafcet/ingest.hpp"

using namespace grafcet;
using nlohmann::json;

namespace {

json partial(const std::string& id, json steps, json transitions = json::array())
{
    return {{"id", id}, {"steps", std::move(steps)}, {"transitions", std::move(transitions)}};
}

GrafcetSpec spec_of(json partials)
{
    json doc = {{"name", "h"}, {"variables", json::array()}, {"partials", std::move(partials)}};
    return parse_spec(doc.dump());
}

}  // namespace

TEST_CASE("enclosing edges and host-first order")
{
    auto spec = testsupport::load_corpus("fig1.grafcet.json");
    auto g = build_hierarchy(spec);
    CHECK(g.acyclic());
    REQUIRE(g.edges.size() == 1);
    CHECK(g.edges[0].kind == HierarchyEdge::Kind::Enclosing);
    CHECK(g.edges[0].from == "G0");
    CHECK(g.edges[0].step == "1");
    CHECK(g.order == std::vector<std::string>{"G0", "G1"});
    CHECK(hierarchy_findings(spec, g).empty());

    auto sits = initial_situations(spec, g, "G1");
    REQUIRE(sits.size() == 1);
    CHECK(sits[0].source.kind == SituationSource::Kind::Enclosing);
    CHECK(sits[0].steps == std::vector<std::string>{"2"});
    CHECK(sits[0].describe() == "enclosing step G0.1");
}

TEST_CASE("order lists hosts first even when declared last")
{
    auto spec = spec_of({partial("Low", {{{"id", "a"}, {"marked", true}}}),
                         {{"id", "Top"}, {"steps", {{{"id", "s"}, {"initial", true}}}},
                          {"enclosings", {{{"step", "s"}, {"target", "Low"}}}}}});
    auto g = build_hierarchy(spec);
    CHECK(g.order == std::vector<std::string>{"Top", "Low"});
}

TEST_CASE("one situation per activation source")
{
    auto spec = spec_of({
        {{"id", "H"},
         {"steps", {{{"id", "a"}, {"initial", true}}, {{"id", "b"}}, {{"id", "c"}}}},
         {"enclosings", {{{"step", "a"}, {"target", "L"}}}},
         {"actions",
          {{{"kind", "forcing"}, {"id", "f1"}, {"step", "b"}, {"target", "L"}, {"situation", {"y"}}},
           {{"kind", "forcing"}, {"id", "f2"}, {"step", "c"}, {"target", "L"}, {"situation", "init"}},
           {{"kind", "forcing"}, {"id", "f3"}, {"step", "c"}, {"target", "L"}, {"situation", "*"}}}}},
        partial("L", {{{"id", "x"}, {"initial", true}}, {{"id", "y"}, {"marked", true}}}),
    });
    auto g = build_hierarchy(spec);
    auto sits = initial_situations(spec, g, "L");
    REQUIRE(sits.size() == 4);
    CHECK(sits[0].source.kind == SituationSource::Kind::InitialSteps);
    CHECK(sits[0].steps == std::vector<std::string>{"x"});
    CHECK(sits[1].source.kind == SituationSource::Kind::Enclosing);
    CHECK(sits[1].steps == std::vector<std::string>{"y"});
    CHECK(sits[2].source.kind == SituationSource::Kind::Forcing);
    CHECK(sits[2].steps == std::vector<std::string>{"y"});
    CHECK(sits[3].source.forced_init);
    CHECK(sits[3].steps == std::vector<std::string>{"x"});
}

TEST_CASE("source transitions give an empty situation when nothing else does")
{
    auto spec = testsupport::load_corpus("g5.grafcet.json");
    auto g = build_hierarchy(spec);
    auto sits = initial_situations(spec, g, "G5");
    REQUIRE(sits.size() == 1);
    CHECK(sits[0].source.kind == SituationSource::Kind::SourceTransitions);
    CHECK(sits[0].steps.empty());
    CHECK(hierarchy_findings(spec, g).empty());
}

TEST_CASE("cycles and dead partials are reported")
{
    auto spec = spec_of({
        {{"id", "A"}, {"steps", {{{"id", "a"}, {"initial", true}}}}, {"enclosings", {{{"step", "a"}, {"target", "B"}}}}},
        {{"id", "B"}, {"steps", {{{"id", "b"}}}}, {"enclosings", {{{"step", "b"}, {"target", "A"}}}}},
        partial("C", {{{"id", "c"}}}),
    });
    auto g = build_hierarchy(spec);
    CHECK_FALSE(g.acyclic());
    CHECK(g.cycle.front() == g.cycle.back());
    auto f = hierarchy_findings(spec, g);
    REQUIRE(f.size() == 2);
    CHECK(f[0].kind == FindingKind::HierarchyCycle);
    CHECK(f[0].severity == Severity::Error);
    CHECK(f[1].kind == FindingKind::DeadPartial);
    CHECK(f[1].location.partial == "C");
}
