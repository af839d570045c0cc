#pragma once

#include <string>
#include <vector>

#include "grafcet/oracle.hpp"
#include "grafcet/pipeline.hpp"

namespace testsupport {

// Every oracle observation that the static analysis fails to cover.
// Execution and activation counts are compared only when the exploration
// neither stopped early nor dropped tokens.
std::vector<std::string> soundness_violations(const grafcet::AnalysisResult& r, const grafcet::OracleFacts& facts);

struct SoundnessRun {
    std::size_t checked = 0;
    std::size_t inconclusive = 0;
    std::vector<std::string> violations;  // "seed N: ..."
    std::vector<std::string> log;         // one line per inconclusive case
};

SoundnessRun soundness_suite(std::uint64_t first_seed, std::size_t count, grafcet::OracleOptions::Mode mode);

// Farkas result against the support-enumeration oracle on random matrices;
// also against bounded value enumeration when all entries fit in `bound`.
struct InvariantRun {
    std::size_t matrices = 0;
    std::size_t enumerated = 0;
    std::vector<std::string> mismatches;
};

InvariantRun invariant_suite(std::uint64_t seed, std::size_t count, std::size_t max_dim, int bound);

}  // namespace testsupport
