#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "grafcet/invariants.hpp"
#include "grafcet/model.hpp"

namespace testsupport {

std::string corpus_path(const std::string& name);
grafcet::GrafcetSpec load_corpus(const std::string& name);

struct GenOptions {
    std::size_t max_steps = 8;
    std::size_t max_transitions = 8;
    std::size_t max_partials = 2;
};

// Random but well-formed specification: source and sink transitions,
// parallel splits and joins, stored/continuous actions, and a second partial
// Grafcet that is free, enclosed or forced by the first.
nlohmann::json random_spec_json(std::mt19937_64& rng, const GenOptions& opts = {});
grafcet::GrafcetSpec random_spec(std::mt19937_64& rng, const GenOptions& opts = {});

// Random matrix with entries in [-range, range], biased towards 0 and +-1.
std::vector<std::vector<int>> random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, int range);

// Minimal-support semiflows of y^T A = 0 by enumerating supports: a support J
// is minimal iff the kernel of A restricted to J is one-dimensional and its
// generator has no zero entry and a single sign. Exact rational arithmetic.
std::vector<grafcet::IntVector> semiflows_by_support(const std::vector<std::vector<int>>& a, std::size_t unknowns);

// Every non-zero y in {0..bound}^unknowns with y^T A = 0, reduced to the
// minimal supports and divided by their gcd.
std::vector<grafcet::IntVector> semiflows_by_enumeration(const std::vector<std::vector<int>>& a, std::size_t unknowns,
                                                         int bound);

std::vector<std::vector<int>> transpose(const std::vector<std::vector<int>>& a, std::size_t cols);

}  // namespace testsupport
