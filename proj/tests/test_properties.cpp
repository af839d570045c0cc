#include <doctest.h>

#include <iostream>
#include <random>

#include "generators.hpp"
#include "grafcet/hierarchy.hpp"
#include "grafcet/ingest.hpp"
#include "grafcet/pipeline.hpp"
#include "soundness.hpp"

using namespace grafcet;

namespace {

void report(const testsupport::SoundnessRun& run)
{
    for (const auto& l : run.log)
        MESSAGE(l);
    for (const auto& v : run.violations)
        MESSAGE(v);
}

}  // namespace

TEST_CASE("soundness against the structural oracle")
{
    auto run = testsupport::soundness_suite(1000, 250, OracleOptions::Mode::Structural);
    report(run);
    CHECK(run.violations.empty());
    CHECK(run.checked + run.inconclusive == 250);
    CHECK(run.inconclusive * 10 <= 250);
}

TEST_CASE("soundness against the semantic oracle")
{
    auto run = testsupport::soundness_suite(5000, 250, OracleOptions::Mode::Semantic);
    report(run);
    CHECK(run.violations.empty());
    CHECK(run.inconclusive * 10 <= 250);
}

TEST_CASE("Farkas elimination equals exhaustive enumeration")
{
    auto run = testsupport::invariant_suite(42, 150, 6, 6);
    for (const auto& m : run.mismatches)
        MESSAGE(m);
    CHECK(run.mismatches.empty());
    CHECK(run.matrices == 150);
    CHECK(run.enumerated >= 100);
}

TEST_CASE("Farkas results are invariants, minimal and normalized")
{
    std::mt19937_64 rng(3);
    for (int i = 0; i < 200; ++i) {
        std::size_t rows = std::uniform_int_distribution<std::size_t>(1, 7)(rng);
        std::size_t cols = std::uniform_int_distribution<std::size_t>(1, 7)(rng);
        IncidenceMatrix m;
        m.entries = testsupport::random_matrix(rng, rows, cols, 3);
        m.steps.resize(rows);
        m.transitions.resize(cols);
        auto s = s_invariants(m);
        for (const auto& y : s.vectors) {
            CHECK(verifies_s_invariant(m, y));
            Integer g = 0;
            for (const auto& x : y)
                g = gcd(g, x);
            CHECK(g == 1);
        }
        for (const auto& a : s.vectors)
            for (const auto& b : s.vectors) {
                if (&a == &b)
                    continue;
                bool subset = true;
                for (std::size_t k = 0; k < a.size(); ++k)
                    subset &= a[k] == 0 || b[k] != 0;
                CHECK_FALSE(subset);
            }
        for (const auto& x : t_invariants(m).vectors)
            CHECK(verifies_t_invariant(m, x));
    }
}

TEST_CASE("reachability is confluent on random nets")
{
    std::mt19937_64 rng(99);
    for (int i = 0; i < 100; ++i) {
        auto spec = testsupport::random_spec(rng);
        auto g = build_hierarchy(spec);
        for (const auto& p : spec.partials) {
            PartialNet net(p);
            for (const auto& sit : initial_situations(spec, g, p.id)) {
                auto fifo = analyze_situation(net, sit);
                CHECK(fifo.dequeues <= worklist_bound(net));
                for (std::uint64_t seed = 1; seed <= 5; ++seed) {
                    auto other = analyze_situation(net, sit, ReachOptions{seed * 7919 + static_cast<std::uint64_t>(i)});
                    CHECK(other.reachable == fifo.reachable);
                    CHECK(other.concurrency == fifo.concurrency);
                }
            }
        }
    }
}

TEST_CASE("the pipeline is deterministic across thread counts")
{
    std::mt19937_64 rng(17);
    for (int i = 0; i < 50; ++i) {
        auto spec = testsupport::random_spec(rng);
        AnalysisOptions one, four;
        one.jobs = 1;
        four.jobs = 4;
        auto a = analyze(spec, one);
        auto b = analyze(spec, four);
        CHECK(a.concurrency.pairs() == b.concurrency.pairs());
        REQUIRE(a.findings.size() == b.findings.size());
        for (std::size_t k = 0; k < a.findings.size(); ++k)
            CHECK(a.findings[k].id() == b.findings[k].id());
    }
}
