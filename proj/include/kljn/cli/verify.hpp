#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace kljn::cli {

struct VerifyOptions {
    bool quick = false;
    std::uint64_t seed = 1;
    /// Test hook: moves the LL/Secure threshold above the mid level so the
    /// classification checks must fail.
    bool inject_broken_threshold = false;
    unsigned jobs = 1;
};

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

std::vector<CheckResult> run_verification(const VerifyOptions& options);

} // namespace kljn::cli
