#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sis {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct VerifyReport {
    std::uint64_t seed = 0;
    std::vector<CheckResult> checks;
    bool all_pass = false;
};

// Battery of cross-module invariant checks (closed-form supports, dual and
// Gramian identities, spectral ranges, sampling certificates, frozen formula
// examples, serialization round-trips). Deterministic in the seed.
VerifyReport run_verify(std::uint64_t seed);

}  // namespace sis
