#include <charconv>
#include <cmath>

#include "dualzf/sim.hpp"

namespace dualzf {

namespace {

double parse_double(std::string_view text, const char* field) {
    double v = 0.0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v))
        throw ConfigError(field, "cannot parse '" + std::string(text) + "' as a number");
    return v;
}

std::vector<std::string_view> split_colon(std::string_view text) {
    std::vector<std::string_view> parts;
    std::size_t pos = 0;
    while (true) {
        const std::size_t next = text.find(':', pos);
        parts.push_back(text.substr(pos, next - pos));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return parts;
}

}  // namespace

std::vector<double> SnrGrid::points() const {
    std::vector<double> out;
    if (step <= 0.0) {
        out.push_back(start);
        return out;
    }
    const double span = (stop - start) / step;
    const auto count = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i) out.push_back(start + static_cast<double>(i) * step);
    return out;
}

SnrGrid parse_snr_grid(std::string_view text) {
    const auto parts = split_colon(text);
    if (parts.size() == 1) {
        const double v = parse_double(parts[0], "snr-db");
        return {v, 0.0, v};
    }
    if (parts.size() != 3) throw ConfigError("snr-db", "expected start:step:stop, got '" + std::string(text) + "'");
    SnrGrid g{parse_double(parts[0], "snr-db"), parse_double(parts[1], "snr-db"), parse_double(parts[2], "snr-db")};
    if (!(g.step > 0.0)) throw ConfigError("snr-db", "grid step must be positive");
    if (g.stop < g.start) throw ConfigError("snr-db", "grid stop is below start");
    return g;
}

BerWindow parse_ber_window(std::string_view text) {
    const auto parts = split_colon(text);
    if (parts.size() != 2) throw ConfigError("ber-window", "expected low:high, got '" + std::string(text) + "'");
    BerWindow w{parse_double(parts[0], "ber-window"), parse_double(parts[1], "ber-window")};
    if (!(w.low > 0.0) || !(w.high > w.low) || w.high > 1.0)
        throw ConfigError("ber-window", "need 0 < low < high <= 1");
    return w;
}

std::string_view to_string(Estimator e) {
    return e == Estimator::count ? "count" : "conditional";
}

Estimator parse_estimator(std::string_view name) {
    if (name == "count") return Estimator::count;
    if (name == "conditional") return Estimator::conditional;
    throw ConfigError("estimator", "unknown estimator '" + std::string(name) + "'");
}

void validate(const SimConfig& cfg) {
    validate(cfg.scheme);
    if (cfg.snr_db.points().empty()) throw ConfigError("snr-db", "SNR grid is empty");
    if (cfg.max_trials == 0) throw ConfigError("max-trials", "must be positive");
    if (cfg.workers == 0) throw ConfigError("workers", "must be positive");
    if (cfg.estimator == Estimator::conditional && !has_conditional_form(cfg.scheme.modulation))
        throw ConfigError("estimator", "the conditional estimator supports bpsk and qpsk only");
}

}  // namespace dualzf
