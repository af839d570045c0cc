#include <doctest.h>

#include "generators.hpp"
#include "grafcet/analysis.hpp"
#include "grafcet/hierarchy.hpp"
#include "grafcet/ingest.hpp"
#include "grafcet/pipeline.hpp"

using namespace grafcet;

namespace {

std::set<std::string> names(const PartialNet& net, const StepSet& s)
{
    auto v = net.names(s);
    return {v.begin(), v.end()};
}

std::map<std::string, std::set<std::string>> table(const PartialNet& net, const ConcurrencyMap& c)
{
    std::map<std::string, std::set<std::string>> out;
    for (std::size_t s = 0; s < c.size(); ++s)
        out[net.step_id(s)] = names(net, c[s]);
    return out;
}

InitialSituation situation(const std::string& partial, std::vector<std::string> steps)
{
    return {partial, {SituationSource::Kind::Forcing, "F", "f0", false}, std::move(steps)};
}

using Table = std::map<std::string, std::set<std::string>>;

const Table kFig4 = {
    {"s1", {"s4", "s5", "s6"}},       {"s2", {"s4", "s5", "s6"}}, {"s3", {"s4", "s5", "s6"}},
    {"s4", {"s1", "s2", "s3", "s5"}}, {"s5", {"s1", "s2", "s3", "s4"}}, {"s6", {"s1", "s2", "s3"}},
};

}  // namespace

TEST_CASE("initially active steps are pairwise concurrent")
{
    auto spec = testsupport::load_corpus("fig4.grafcet.json");
    PartialNet net(*spec.partial("G"));
    auto init = init_concurrency(net, net.to_set({"s3", "s4", "s5"}));
    auto t = table(net, init);
    CHECK(t["s3"] == std::set<std::string>{"s4", "s5"});
    CHECK(t["s4"] == std::set<std::string>{"s3", "s5"});
    CHECK(t["s5"] == std::set<std::string>{"s3", "s4"});
    CHECK(t["s1"].empty());
    CHECK(t["s6"].empty());
}

TEST_CASE("Fig. 4 concurrency fixpoint")
{
    auto spec = testsupport::load_corpus("fig4.grafcet.json");
    PartialNet net(*spec.partial("G"));
    auto r = analyze_situation(net, situation("G", {"s3", "s4", "s5"}));
    CHECK(r.reachable.count() == 6);
    CHECK(table(net, r.concurrency) == kFig4);
    CHECK(r.dequeues <= worklist_bound(net));
}

TEST_CASE("the fixpoint does not depend on the worklist order")
{
    for (const char* name : {"fig4", "fig5", "g2", "g3", "g4", "g5", "g6", "g_rit"}) {
        CAPTURE(name);
        auto spec = testsupport::load_corpus(std::string(name) + ".grafcet.json");
        auto g = build_hierarchy(spec);
        for (const auto& p : spec.partials) {
            PartialNet net(p);
            for (const auto& sit : initial_situations(spec, g, p.id)) {
                auto fifo = analyze_situation(net, sit);
                for (std::uint64_t seed = 1; seed <= 6; ++seed) {
                    auto shuffled = analyze_situation(net, sit, ReachOptions{seed});
                    CHECK(shuffled.reachable == fifo.reachable);
                    CHECK(shuffled.concurrency == fifo.concurrency);
                }
            }
        }
    }
}

TEST_CASE("the relation is irreflexive and symmetric")
{
    for (const char* name : {"fig4", "fig5", "g2", "g3", "g4", "g5", "g6", "g_rit"}) {
        auto r = analyze(testsupport::load_corpus(std::string(name) + ".grafcet.json"));
        for (const auto& pa : r.partials) {
            const auto& c = pa.merged.concurrency;
            for (std::size_t a = 0; a < c.size(); ++a) {
                CHECK_FALSE(c[a].test(a));
                for (std::size_t b = 0; b < c.size(); ++b)
                    CHECK(c[a].test(b) == c[b].test(a));
            }
        }
    }
}

TEST_CASE("Fig. 2 structures")
{
    SUBCASE("G2: several initial steps of one sequence")
    {
        auto r = analyze(testsupport::load_corpus("g2.grafcet.json"));
        CHECK(r.concurrency.pair_count() == 3);
    }
    SUBCASE("G3: parallel initial steps")
    {
        auto r = analyze(testsupport::load_corpus("g3.grafcet.json"));
        const auto& net = r.partial("G3")->net;
        auto t = table(net, r.partial("G3")->merged.concurrency);
        CHECK(t["1"] == std::set<std::string>{"2", "4"});
        CHECK(t["3"] == std::set<std::string>{"2", "4"});
        CHECK_FALSE(r.concurrency.concurrent("G3.1", "G3.3"));
    }
    SUBCASE("G4: an upstream step that stays active")
    {
        auto r = analyze(testsupport::load_corpus("g4.grafcet.json"));
        CHECK(r.concurrency.concurrent("G4.1", "G4.2"));
        CHECK(r.concurrency.concurrent("G4.1", "G4.3"));
        CHECK(r.concurrency.concurrent("G4.2", "G4.3"));
    }
    SUBCASE("G5: source transitions")
    {
        auto r = analyze(testsupport::load_corpus("g5.grafcet.json"));
        const auto* pa = r.partial("G5");
        CHECK(pa->merged.reachable.count() == 2);
        CHECK(r.concurrency.concurrent("G5.1", "G5.2"));
        CHECK(pa->situations[0].source_pass);
    }
    SUBCASE("G6: split and join")
    {
        auto r = analyze(testsupport::load_corpus("g6.grafcet.json"));
        CHECK(r.concurrency.concurrent("G6.2", "G6.3"));
        CHECK(r.concurrency.concurrent("G6.2", "G6.5"));
        CHECK(r.concurrency.concurrent("G6.4", "G6.5"));
        CHECK_FALSE(r.concurrency.concurrent("G6.1", "G6.2"));
        CHECK_FALSE(r.concurrency.concurrent("G6.2", "G6.4"));
    }
    SUBCASE("G7 and G8 under one enclosing step")
    {
        auto r = analyze(testsupport::load_corpus("g7_g8.grafcet.json"));
        for (const char* a : {"G7.1", "G7.2"})
            for (const char* b : {"G8.3", "G8.4", "G0.0"})
                CHECK(r.concurrency.concurrent(a, b));
        CHECK_FALSE(r.concurrency.concurrent("G7.1", "G7.2"));
    }
}

TEST_CASE("unreachable steps stay out of the relation")
{
    auto spec = parse_spec(R"({"name": "u", "variables": [], "partials": [{"id": "P",
        "steps": [{"id": "a", "initial": true}, {"id": "b"}, {"id": "c"}],
        "transitions": [{"id": "t", "from": ["c"], "to": ["b"]}]}]})");
    auto r = analyze(spec);
    const auto* pa = r.partial("P");
    CHECK(pa->merged.reachable.count() == 1);
    CHECK(r.concurrency.pair_count() == 0);
    CHECK(r.count(FindingKind::UnreachableStep) == 2);
}

TEST_CASE("hierarchy lift on the rotary indexing table")
{
    auto r = analyze(testsupport::load_corpus("g_rit.grafcet.json"));
    for (int a = 1; a <= 6; ++a)
        for (int b = a + 1; b <= 6; ++b)
            for (int sa = 1; sa <= 3; ++sa)
                for (int sb = 1; sb <= 3; ++sb)
                    CHECK(r.concurrency.concurrent("G" + std::to_string(a) + "0." + std::to_string(sa),
                                                   "G" + std::to_string(b) + "0." + std::to_string(sb)));
    for (int k = 1; k <= 6; ++k) {
        std::string station = "G" + std::to_string(k) + "0.";
        CHECK(r.concurrency.concurrent(station + "2", "G_RIT." + std::to_string(10 + k)));
        CHECK(r.concurrency.concurrent(station + "2", "G_OM.3"));
        CHECK_FALSE(r.concurrency.concurrent(station + "2", "G_RIT.10"));
        CHECK_FALSE(r.concurrency.concurrent(station + "2", "G_OM.1"));
    }
    CHECK(r.concurrency.concurrent("G_RIT.10", "G_OM.3"));
    CHECK_FALSE(r.concurrency.concurrent("G_RIT.10", "G_OM.2"));
}

TEST_CASE("free partial Grafcets form a clique")
{
    auto spec = parse_spec(R"({"name": "c", "variables": [], "partials": [
        {"id": "A", "steps": [{"id": "1", "initial": true}, {"id": "2"}],
         "transitions": [{"id": "t", "from": ["1"], "to": ["2"]}]},
        {"id": "B", "steps": [{"id": "1", "initial": true}]}]})");
    auto r = analyze(spec);
    CHECK(r.concurrency.concurrent("A.1", "B.1"));
    CHECK(r.concurrency.concurrent("A.2", "B.1"));
    CHECK_FALSE(r.concurrency.concurrent("A.1", "A.2"));
}
