#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dualzf {

struct CheckResult {
    std::string name;
    double worst = 0.0;  // largest observed violation metric
    double limit = 0.0;
    bool pass = false;
};

// Randomized property suites over `trials` channel draws with n antennas.
CheckResult check_snr_duality(std::size_t trials, std::size_t n, std::uint64_t seed);
CheckResult check_alamouti_zf(std::size_t trials, std::size_t n, std::uint64_t seed);
CheckResult check_uplink_zf(std::size_t trials, std::size_t n, std::uint64_t seed);
CheckResult check_downlink_zf(std::size_t trials, std::size_t n, std::uint64_t seed);
CheckResult check_bd_null_space(std::size_t trials, std::size_t n, std::uint64_t seed);

// Noiseless downlink IC: worst leakage from the other user and across
// symbols, plus a blind PSK round trip of all four QPSK symbols. A trial with
// any wrong decision counts as a failure regardless of leakage.
CheckResult check_blind_decoupling(std::size_t trials, std::size_t n, std::uint64_t seed);

std::vector<CheckResult> run_duality_suite(std::size_t trials, std::size_t n, std::uint64_t seed);

}  // namespace dualzf
