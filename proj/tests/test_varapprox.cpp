#include <doctest.h>

#include "generators.hpp"
#include "grafcet/ingest.hpp"
#include "grafcet/pipeline.hpp"

using namespace grafcet;

TEST_CASE("Count saturates")
{
    auto inf = Count::infinite();
    auto big = Count::finite(~std::uint64_t{0} - 1);
    CHECK((Count::finite(2) + Count::finite(3)) == Count::finite(5));
    CHECK((Count::finite(2) * Count::finite(3)) == Count::finite(6));
    CHECK((big + Count::finite(5)).is_infinite());
    CHECK((big * Count::finite(2)).is_infinite());
    CHECK((inf * Count::finite(0)).is_infinite() == false);
    CHECK((inf + Count::finite(1)).is_infinite());
    CHECK(Count::finite(7) < inf);
    CHECK_FALSE(inf < Count::finite(7));
    CHECK(inf.str() == "inf");
    CHECK(Count::finite(4).str() == "4");
}

TEST_CASE("writer classification")
{
    auto stored = [](const char* value) {
        StoredAction a;
        a.var = "k";
        a.value = parse_value(value, VarType::Int);
        return classify_writer(a);
    };
    CHECK(stored("k + 1").kind == WriterEffect::Kind::Shift);
    CHECK(stored("k + 1").amount == 1);
    CHECK(stored("k - 3").amount == -3);
    CHECK(stored("2 + k - 1").amount == 1);
    CHECK(stored("7").kind == WriterEffect::Kind::Constant);
    CHECK(stored("7").amount == 7);
    CHECK(stored("k").kind == WriterEffect::Kind::Shift);
    CHECK(stored("k").amount == 0);
    CHECK(stored("2*k").kind == WriterEffect::Kind::Opaque);
    CHECK(stored("k + j").kind == WriterEffect::Kind::Opaque);
}

TEST_CASE("interval hull")
{
    using K = WriterEffect::Kind;
    auto one = Count::finite(1);
    CHECK(hull_writes(0, {}) == Interval::point(0));
    CHECK(hull_writes(0, {{{K::Shift, 1}, Count::finite(4)}}) == Interval{0, 4});
    CHECK(hull_writes(5, {{{K::Shift, -2}, Count::finite(3)}}) == Interval{-1, 5});
    CHECK(hull_writes(0, {{{K::Constant, 3}, one}}) == Interval{0, 3});
    CHECK(hull_writes(0, {{{K::Constant, 3}, one}, {{K::Shift, 1}, Count::finite(2)}}) == Interval{0, 5});
    CHECK(hull_writes(0, {{{K::Shift, 1}, Count::infinite()}}) == Interval{0, std::nullopt});
    CHECK(hull_writes(0, {{{K::Shift, -1}, Count::infinite()}}) == Interval{std::nullopt, 0});
    CHECK(hull_writes(0, {{{K::Opaque, 0}, one}}) == Interval::top());
    CHECK(hull_writes(0, {{{K::Shift, 1}, Count::finite(0)}}) == Interval::point(0));
    CHECK(to_string(Interval{0, 4}) == "[0, 4]");
    CHECK(to_string(Interval::top()) == "[-inf, +inf]");
}

TEST_CASE("Fig. 5 bound and interval")
{
    auto r = analyze(testsupport::load_corpus("fig5.grafcet.json"));
    const auto* b = r.bounds.find("G", "inc");
    REQUIRE(b);
    CHECK(b->count == Count::finite(4));
    CHECK(b->reasons == std::vector<std::string>{"n*|S^I|"});
    const auto* k = r.variable("k");
    REQUIRE(k);
    CHECK(k->range == Interval{0, 4});
    CHECK(k->writers == std::vector<std::string>{"G.inc"});
}

TEST_CASE("unbounded writers")
{
    SUBCASE("loop")
    {
        auto r = analyze(testsupport::load_corpus("g2.grafcet.json"));
        CHECK(r.bounds.find("G2", "inc")->count.is_infinite());
        CHECK(r.variable("k")->range == Interval{0, std::nullopt});
    }
    SUBCASE("uncovered step")
    {
        auto r = analyze(testsupport::load_corpus("g5.grafcet.json"));
        const auto* b = r.bounds.find("G5", "dec");
        CHECK(b->count.is_infinite());
        CHECK(b->reasons == std::vector<std::string>{"uncovered-S-invariant"});
        CHECK(r.variable("k")->range == Interval{std::nullopt, 0});
    }
    SUBCASE("enclosed partial inherits its host")
    {
        auto r = analyze(testsupport::load_corpus("g7_g8.grafcet.json"));
        CHECK(r.bounds.find("G7", "a")->count.is_infinite());
        CHECK(r.variable("v")->range == Interval{0, 2});
    }
}

TEST_CASE("host multiplicity scales an enclosed partial")
{
    auto spec = parse_spec(R"({"name": "h", "variables": [
        {"name": "c", "kind": "internal", "type": "int", "init": 0}],
      "partials": [
        {"id": "H", "steps": [{"id": "1", "initial": true}, {"id": "2"}, {"id": "3"}],
         "enclosings": [{"step": "2", "target": "L"}],
         "transitions": [{"id": "a", "from": ["1"], "to": ["2"]}, {"id": "b", "from": ["2"], "to": ["3"]}]},
        {"id": "L", "steps": [{"id": "x", "marked": true}, {"id": "y"}],
         "transitions": [{"id": "t", "from": ["x"], "to": ["y"]}],
         "actions": [{"kind": "stored", "id": "inc", "step": "y", "var": "c", "value": "c + 1", "trigger": "activation"}]}]})");
    auto r = analyze(spec);
    CHECK(r.bounds.find("L", "inc")->count == Count::finite(1));
    CHECK(r.variable("c")->range == Interval{0, 1});
}

TEST_CASE("Boolean approximation")
{
    auto r = analyze(testsupport::load_corpus("fig1.grafcet.json"));
    CHECK(r.variable("A")->values == BoolSet::both());
    CHECK(r.variable("start")->values == BoolSet::both());

    auto spec = parse_spec(R"({"name": "b", "variables": [
        {"name": "out", "kind": "output", "type": "bool"},
        {"name": "f", "kind": "internal", "type": "bool", "init": 0},
        {"name": "g", "kind": "internal", "type": "bool", "init": 1}],
      "partials": [{"id": "P", "steps": [{"id": "1", "initial": true}, {"id": "2"}],
        "actions": [{"kind": "continuous", "id": "c", "step": "2", "var": "out"},
                    {"kind": "stored", "id": "s", "step": "1", "var": "f", "value": "false", "trigger": "activation"}]}]})");
    r = analyze(spec);
    CHECK(r.variable("out")->values == BoolSet::only(false));
    CHECK(r.variable("f")->values == BoolSet::only(false));
    CHECK(r.variable("g")->values == BoolSet::only(true));
    CHECK(to_string(BoolSet::only(false)) == "{false}");
}
