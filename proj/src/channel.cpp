#include "dualzf/channel.hpp"

#include <bit>
#include <cmath>
#include <numbers>

namespace dualzf {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr double kInvSqrt2 = 0.70710678118654752440;

}  // namespace

SeededRng::SeededRng(std::uint64_t master_seed, std::uint64_t stream_id)
    : master_(master_seed), stream_(stream_id) {
    state_ = splitmix64(splitmix64(master_seed) ^ std::rotl(splitmix64(stream_id + 0x632be59bd9b4e019ULL), 17));
}

SeededRng::result_type SeededRng::operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

cplx SeededRng::complex_normal() {
    const double re = normal();
    const double im = normal();
    return {re * kInvSqrt2, im * kInvSqrt2};
}

ComplexMatrix sample_cn_matrix(std::size_t rows, std::size_t cols, SeededRng& rng) {
    ComplexMatrix m(rows, cols);
    for (auto& v : m.data()) v = rng.complex_normal();
    return m;
}

ChannelPair sample_channel_pair(std::size_t n_tx, SeededRng& rng) {
    if (n_tx < 2) throw ConfigError("n-tx", "channel pair needs at least 2 transmit antennas");
    ChannelPair pair;
    pair.n_tx = n_tx;
    for (auto& h : pair.H) h = sample_cn_matrix(n_tx, 2, rng);
    return pair;
}

std::vector<cplx> add_awgn(std::span<const cplx> signal, double variance, SeededRng& rng) {
    if (!(variance >= 0.0)) throw ConfigError("variance", "noise variance must be non-negative");
    std::vector<cplx> out(signal.begin(), signal.end());
    if (variance == 0.0) return out;
    const double sigma = std::sqrt(variance);
    for (auto& v : out) v += sigma * rng.complex_normal();
    return out;
}

void add_awgn(ComplexMatrix& signal, double variance, SeededRng& rng) {
    if (!(variance >= 0.0)) throw ConfigError("variance", "noise variance must be non-negative");
    if (variance == 0.0) return;
    const double sigma = std::sqrt(variance);
    for (auto& v : signal.data()) v += sigma * rng.complex_normal();
}

std::string_view to_string(Modulation m) {
    switch (m) {
        case Modulation::bpsk: return "bpsk";
        case Modulation::qpsk: return "qpsk";
        case Modulation::psk8: return "8psk";
        case Modulation::qam16: return "16qam";
    }
    return "?";
}

Modulation parse_modulation(std::string_view name) {
    if (name == "bpsk") return Modulation::bpsk;
    if (name == "qpsk") return Modulation::qpsk;
    if (name == "8psk") return Modulation::psk8;
    if (name == "16qam") return Modulation::qam16;
    throw ConfigError("constellation", "unknown constellation '" + std::string(name) + "'");
}

Constellation::Constellation(Modulation m, std::vector<cplx> points, unsigned bits)
    : modulation_(m), points_(std::move(points)), bits_per_symbol_(bits) {}

const Constellation& Constellation::get(Modulation m) {
    static const Constellation bpsk(Modulation::bpsk, {1.0, -1.0}, 1);

    static const Constellation qpsk = [] {
        std::vector<cplx> p(4);
        p[0b00] = cplx(1, 1) * kInvSqrt2;
        p[0b01] = cplx(-1, 1) * kInvSqrt2;
        p[0b11] = cplx(-1, -1) * kInvSqrt2;
        p[0b10] = cplx(1, -1) * kInvSqrt2;
        return Constellation(Modulation::qpsk, std::move(p), 2);
    }();

    static const Constellation psk8 = [] {
        std::vector<cplx> p(8);
        for (unsigned k = 0; k < 8; ++k) p[k ^ (k >> 1)] = std::polar(1.0, k * std::numbers::pi / 4.0);
        return Constellation(Modulation::psk8, std::move(p), 3);
    }();

    static const Constellation qam16 = [] {
        // Per-axis Gray: 00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3.
        const double level[4] = {-3.0, -1.0, 3.0, 1.0};
        std::vector<cplx> p(16);
        const double scale = 1.0 / std::sqrt(10.0);
        for (unsigned label = 0; label < 16; ++label)
            p[label] = cplx(level[label >> 2], level[label & 3]) * scale;
        return Constellation(Modulation::qam16, std::move(p), 4);
    }();

    switch (m) {
        case Modulation::bpsk: return bpsk;
        case Modulation::qpsk: return qpsk;
        case Modulation::psk8: return psk8;
        case Modulation::qam16: return qam16;
    }
    throw UnsupportedConstellation("unknown modulation");
}

std::vector<cplx> modulate(std::span<const std::uint8_t> bits, const Constellation& c) {
    const unsigned m = c.bits_per_symbol();
    if (bits.size() % m != 0)
        throw ConfigError("bits", "bit count " + std::to_string(bits.size()) + " is not a multiple of " +
                                      std::to_string(m));
    std::vector<cplx> out;
    out.reserve(bits.size() / m);
    for (std::size_t i = 0; i < bits.size(); i += m) {
        std::size_t label = 0;
        for (unsigned b = 0; b < m; ++b) label = (label << 1) | (bits[i + b] & 1u);
        out.push_back(c.point(label));
    }
    return out;
}

std::vector<std::uint8_t> demap(std::span<const std::size_t> indices, const Constellation& c) {
    const unsigned m = c.bits_per_symbol();
    std::vector<std::uint8_t> out;
    out.reserve(indices.size() * m);
    for (std::size_t idx : indices) {
        if (idx >= c.size()) throw ConfigError("index", "point index out of range");
        for (unsigned b = m; b-- > 0;) out.push_back(static_cast<std::uint8_t>((idx >> b) & 1u));
    }
    return out;
}

std::size_t detect_blind_psk(cplx stat, const Constellation& c) {
    if (!c.is_psk()) throw UnsupportedConstellation("blind detection needs an equal-energy (PSK) constellation");
    const auto pts = c.points();
    std::size_t best = 0;
    double best_metric = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double metric = stat.real() * pts[i].real() + stat.imag() * pts[i].imag();
        if (metric > best_metric) {
            best_metric = metric;
            best = i;
        }
    }
    return best;
}

std::size_t detect_coherent(cplx stat, double gain, const Constellation& c) {
    if (!(gain > 0.0)) throw ConfigError("gain", "coherent detection needs a positive gain");
    const auto pts = c.points();
    std::size_t best = 0;
    double best_metric = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double metric = std::norm(stat - gain * pts[i]);
        if (metric < best_metric) {
            best_metric = metric;
            best = i;
        }
    }
    return best;
}

std::size_t detect(cplx stat, double gain, const Constellation& c) {
    return c.is_psk() ? detect_blind_psk(stat, c) : detect_coherent(stat, gain, c);
}

}  // namespace dualzf
