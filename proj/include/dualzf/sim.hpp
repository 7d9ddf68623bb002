#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "dualzf/schemes.hpp"

namespace dualzf {

struct SnrGrid {
    double start = 0.0;
    double step = 1.0;
    double stop = 0.0;

    std::vector<double> points() const;
};

// "start:step:stop" or a single value.
SnrGrid parse_snr_grid(std::string_view text);

// How a point's BER is estimated. `count` is the ratio of counted bit errors;
// `conditional` averages the exact error probability given each trial's
// channel, which resolves error rates far below 1 / (simulated bits).
enum class Estimator { count, conditional };

std::string_view to_string(Estimator e);
Estimator parse_estimator(std::string_view name);

struct SimConfig {
    SchemeConfig scheme;
    SnrGrid snr_db;
    std::uint64_t min_bit_errors = 200;
    std::uint64_t max_trials = 10'000'000;
    std::uint64_t master_seed = 1;
    unsigned workers = 1;
    Estimator estimator = Estimator::count;
};

void validate(const SimConfig& cfg);

struct BerPoint {
    double snr_db = 0.0;
    std::uint64_t bits = 0;
    std::uint64_t bit_errors = 0;
    double ber = 0.0;
    double ci95 = 0.0;
    std::uint64_t trials = 0;
    bool truncated = false;

    bool operator==(const BerPoint&) const = default;
};

struct BerCurve {
    std::string scheme;
    std::size_t n_tx = 0;
    std::string constellation;
    Estimator estimator = Estimator::count;
    std::vector<BerPoint> points;

    bool operator==(const BerCurve&) const = default;
};

// Trials are grouped in fixed batches; a point stops after the first batch
// that brings the error count to min_bit_errors (expected errors for the
// conditional estimator) or the trial count to max_trials. Batches are
// reduced in order, so the result does not depend on the worker count.
inline constexpr std::uint64_t kBatchTrials = 1024;

using ProgressFn = std::function<void(const BerPoint&)>;

BerCurve run_ber(const SimConfig& cfg, const ProgressFn& progress = {});

double ci95_halfwidth(double ber, std::uint64_t bits);

struct BerWindow {
    double low = 1e-5;
    double high = 1e-3;
};

BerWindow parse_ber_window(std::string_view text);

struct DiversityEstimate {
    double slope = 0.0;
    BerWindow fit_window;
    double r_squared = 0.0;
    std::size_t points_used = 0;
};

// Least-squares slope of log10(BER) against SNR_dB / 10, negated, over points
// inside the window with at least min_bit_errors errors. Throws
// InsufficientData with fewer than 3 qualifying points.
DiversityEstimate estimate_diversity(const BerCurve& curve, BerWindow window = {},
                                     std::uint64_t min_bit_errors = 100);

// SNR (dB) where the curve crosses target BER, by linear interpolation of
// log10(BER) between the bracketing points. Throws InsufficientData when the
// curve does not cross the target.
double snr_at_ber(const BerCurve& curve, double target);

void write_csv(const BerCurve& curve, std::ostream& out);
void write_csv(const BerCurve& curve, const std::filesystem::path& path);
BerCurve read_csv(std::istream& in);
BerCurve read_csv(const std::filesystem::path& path);

}  // namespace dualzf
