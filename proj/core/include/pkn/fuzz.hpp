#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pkn/checks.hpp"

namespace pkn {

struct Histogram {
    std::vector<double> edges;        // bin boundaries, size counts.size() + 1
    std::vector<std::int64_t> counts;
};

/**
 * Aggregate result of one randomized suite.  Instance i draws all of its
 * randomness from derive_rng(seed, i), so results are independent of
 * evaluation order and identical across runs for a fixed (suite, trials,
 * seed) triple.
 */
struct FuzzSummary {
    std::string suite;
    std::int64_t trials = 0;
    std::uint64_t seed = 0;
    std::int64_t violations = 0;
    std::int64_t vacuous = 0;
    double min_slack = 0.0;
    double max_slack = 0.0;
    Histogram histogram;
    std::optional<Witness> first_violation;
};

/// Suite names accepted by run_fuzz_suite (excluding "all").
const std::vector<std::string>& fuzz_suite_names();

/// Runs `trials` seeded instances of the named suite.  Throws
/// std::invalid_argument for unknown names.
FuzzSummary run_fuzz_suite(const std::string& suite, std::int64_t trials,
                           std::uint64_t seed);

}  // namespace pkn
