#pragma once

// The end-to-end verification suite behind `loglap verify` and the
// acceptance test binary: every identity the library promises, checked at
// a pinned tolerance with one pass/fail line per criterion.

#include <iosfwd>
#include <string>
#include <vector>

namespace loglap {

struct CheckResult {
    std::string name;
    bool passed = false;
    double observed = 0.0; // worst deviation (or fitted quantity) seen
    double bound = 0.0;    // the pinned tolerance it must stay within
    std::string note;
    double seconds = 0.0;
    double time_limit = 0.0;
};

/// Runs all criteria in order.  `progress`, when given, receives one
/// PASS/FAIL line per criterion as it completes.
std::vector<CheckResult> run_verification_suite(std::ostream* progress);

/// Stable CSV body (no timing columns, byte-identical across runs).
std::string verification_csv(const std::vector<CheckResult>& results);

bool all_passed(const std::vector<CheckResult>& results);

} // namespace loglap
