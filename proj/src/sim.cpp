#include "dualzf/sim.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

namespace dualzf {

namespace {

struct BatchTally {
    std::uint64_t trials = 0;
    std::uint64_t bits = 0;
    std::uint64_t errors = 0;
    double expected = 0.0;
    double trial_ber_sq = 0.0;  // sum of squared per-trial conditional BERs
};

BatchTally run_batch(const SchemeConfig& scheme, double P, std::uint64_t seed, std::uint64_t first,
                     std::uint64_t count) {
    BatchTally t;
    for (std::uint64_t i = 0; i < count; ++i) {
        const TrialResult r = run_trial(scheme, P, seed, first + i);
        t.trials += 1;
        t.bits += r.bits;
        t.errors += r.bit_errors;
        t.expected += r.expected_errors;
        const double b = r.expected_errors / static_cast<double>(r.bits);
        t.trial_ber_sq += b * b;
    }
    return t;
}

BerPoint simulate_point(const SimConfig& cfg, double snr_db) {
    const double P = db_to_power(snr_db);
    const bool conditional = cfg.estimator == Estimator::conditional;
    const auto target = static_cast<double>(cfg.min_bit_errors);

    BatchTally acc;
    std::uint64_t next_batch = 0;
    bool met = false;
    while (!met && acc.trials < cfg.max_trials) {
        // One wave of up to `workers` consecutive batches.
        std::vector<std::pair<std::uint64_t, std::uint64_t>> ranges;
        for (unsigned w = 0; w < cfg.workers; ++w) {
            const std::uint64_t first = next_batch * kBatchTrials;
            if (first >= cfg.max_trials) break;
            ranges.emplace_back(first, std::min(kBatchTrials, cfg.max_trials - first));
            ++next_batch;
        }
        std::vector<BatchTally> tallies(ranges.size());
        if (ranges.size() == 1) {
            tallies[0] = run_batch(cfg.scheme, P, cfg.master_seed, ranges[0].first, ranges[0].second);
        } else {
            std::vector<std::exception_ptr> failures(ranges.size());
            std::vector<std::thread> pool;
            pool.reserve(ranges.size());
            for (std::size_t i = 0; i < ranges.size(); ++i)
                pool.emplace_back([&, i] {
                    try {
                        tallies[i] = run_batch(cfg.scheme, P, cfg.master_seed, ranges[i].first, ranges[i].second);
                    } catch (...) {
                        failures[i] = std::current_exception();
                    }
                });
            for (auto& th : pool) th.join();
            for (const auto& f : failures)
                if (f) std::rethrow_exception(f);
        }
        for (const BatchTally& t : tallies) {
            acc.trials += t.trials;
            acc.bits += t.bits;
            acc.errors += t.errors;
            acc.expected += t.expected;
            acc.trial_ber_sq += t.trial_ber_sq;
            met = (conditional ? acc.expected : static_cast<double>(acc.errors)) >= target;
            if (met || acc.trials >= cfg.max_trials) break;
        }
    }

    BerPoint p;
    p.snr_db = snr_db;
    p.bits = acc.bits;
    p.bit_errors = acc.errors;
    p.trials = acc.trials;
    p.truncated = !met;
    if (conditional) {
        const double n = static_cast<double>(acc.trials);
        p.ber = acc.expected / static_cast<double>(acc.bits);
        // Every trial carries the same number of bits, so the per-trial mean
        // equals the pooled ratio.
        const double var = n > 1 ? std::max(0.0, (acc.trial_ber_sq - n * p.ber * p.ber) / (n - 1)) : 0.0;
        p.ci95 = 1.96 * std::sqrt(var / n);
    } else {
        p.ber = static_cast<double>(acc.errors) / static_cast<double>(acc.bits);
        p.ci95 = ci95_halfwidth(p.ber, acc.bits);
    }
    return p;
}

}  // namespace

double ci95_halfwidth(double ber, std::uint64_t bits) {
    if (bits == 0) return 0.0;
    return 1.96 * std::sqrt(ber * (1.0 - ber) / static_cast<double>(bits));
}

BerCurve run_ber(const SimConfig& cfg, const ProgressFn& progress) {
    validate(cfg);
    BerCurve curve;
    curve.scheme = to_string(cfg.scheme.scheme);
    curve.n_tx = cfg.scheme.n_tx;
    curve.constellation = to_string(cfg.scheme.modulation);
    curve.estimator = cfg.estimator;
    for (double snr : cfg.snr_db.points()) {
        curve.points.push_back(simulate_point(cfg, snr));
        if (progress) progress(curve.points.back());
    }
    return curve;
}

DiversityEstimate estimate_diversity(const BerCurve& curve, BerWindow window, std::uint64_t min_bit_errors) {
    std::vector<double> xs, ys;
    for (const BerPoint& p : curve.points) {
        if (p.ber <= 0.0 || p.ber < window.low || p.ber > window.high) continue;
        if (curve.estimator == Estimator::count && p.bit_errors < min_bit_errors) continue;
        xs.push_back(p.snr_db / 10.0);
        ys.push_back(std::log10(p.ber));
    }
    if (xs.size() < 3)
        throw InsufficientData("diversity fit needs at least 3 points inside the BER window, found " +
                               std::to_string(xs.size()));
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (!(sxx > 0.0)) throw InsufficientData("diversity fit needs distinct SNR values");
    DiversityEstimate est;
    est.slope = -sxy / sxx;
    est.fit_window = window;
    est.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    est.points_used = xs.size();
    return est;
}

double snr_at_ber(const BerCurve& curve, double target) {
    const double lt = std::log10(target);
    for (std::size_t i = 1; i < curve.points.size(); ++i) {
        const BerPoint& a = curve.points[i - 1];
        const BerPoint& b = curve.points[i];
        if (a.ber <= 0.0 || b.ber <= 0.0) continue;
        const double la = std::log10(a.ber), lb = std::log10(b.ber);
        if (la >= lt && lb <= lt && la != lb) return a.snr_db + (la - lt) / (la - lb) * (b.snr_db - a.snr_db);
    }
    throw InsufficientData("curve does not cross BER " + std::to_string(target));
}

}  // namespace dualzf
