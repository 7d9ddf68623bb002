#pragma once

#include <cstdint>
#include <string_view>

#include "dualzf/channel.hpp"
#include "dualzf/downlink_ic.hpp"

namespace dualzf {

enum class Scheme { alamouti, dual_alamouti, svd, uplink_ic, downlink_ic, downlink_ic_pa, bd, tdma_da };

std::string_view to_string(Scheme s);
Scheme parse_scheme(std::string_view name);

std::string_view to_string(PrecoderKind k);
PrecoderKind parse_precoder_kind(std::string_view name);

struct SchemeConfig {
    Scheme scheme = Scheme::downlink_ic;
    std::size_t n_tx = 2;
    Modulation modulation = Modulation::bpsk;
    // Symbol separating stage of the IC schemes (uplink filter and downlink
    // precoder alike).
    PrecoderKind ic_kind = PrecoderKind::projection;
};

// Throws ConfigError naming the offending field.
void validate(const SchemeConfig& cfg);

// Constellation that gives R bits per channel use per user. TDMA serves one
// user at a time and so needs twice the bits per symbol.
Modulation constellation_for_rate(Scheme s, unsigned rate);

// Symbols delivered per trial (all users). Each trial is one coherence block
// of two channel uses, except svd which spends one use per symbol.
std::size_t symbols_per_trial(Scheme s);

struct TrialResult {
    std::uint64_t bits = 0;
    std::uint64_t bit_errors = 0;
    // Expected bit errors given this trial's channel, from the per-stream
    // post-combining SNR. Only BPSK and QPSK have the closed form.
    double expected_errors = 0.0;
};

// Conditional bit error probability of one stream with post-combining SNR
// gamma (BPSK and QPSK with Gray mapping).
double conditional_bit_error(Modulation m, double gamma);

bool has_conditional_form(Modulation m);

// One independent block: fresh channel, random bits, noise, detection. All
// randomness comes from the stream (seed, trial).
TrialResult run_trial(const SchemeConfig& cfg, double P, std::uint64_t seed, std::uint64_t trial);

// Converts a dB figure to linear transmit power.
double db_to_power(double snr_db);

}  // namespace dualzf
