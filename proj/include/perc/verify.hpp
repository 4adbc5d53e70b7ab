#pragma once

#include <string>
#include <vector>

namespace perc {

struct VerifyCheck {
    std::string name;
    std::string params;
    bool pass = false;
    std::string detail;
};

struct VerifyReport {
    std::string suite;
    std::vector<VerifyCheck> checks;

    bool all_passed() const;
    std::string to_json() const;
};

// suite in {geometry, identities, coupling, all}
VerifyReport run_verify_suite(const std::string& suite, std::uint64_t seed = 1);

}  // namespace perc
