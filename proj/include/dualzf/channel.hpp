#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dualzf/linalg.hpp"

namespace dualzf {

// Counter-based generator keyed by (master_seed, stream_id). Each Monte Carlo
// trial owns the stream equal to its trial index, so results do not depend on
// how trials are spread over workers.
class SeededRng {
public:
    using result_type = std::uint64_t;

    SeededRng(std::uint64_t master_seed, std::uint64_t stream_id);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()();

    double normal() { return normal_(*this); }
    // CN(0, 1): two standard normals scaled by 1/sqrt(2).
    cplx complex_normal();
    bool bit() { return ((*this)() >> 63) != 0; }

    std::uint64_t master_seed() const noexcept { return master_; }
    std::uint64_t stream_id() const noexcept { return stream_; }

private:
    std::uint64_t master_;
    std::uint64_t stream_;
    std::uint64_t state_;
    std::normal_distribution<double> normal_;
};

// Two users' N x 2 flat-fading matrices for one coherence block. Entry (i, j)
// of H[k] is the gain from transmit antenna i to receive antenna j of user k.
struct ChannelPair {
    std::size_t n_tx = 0;
    std::array<ComplexMatrix, 2> H;
};

ComplexMatrix sample_cn_matrix(std::size_t rows, std::size_t cols, SeededRng& rng);

ChannelPair sample_channel_pair(std::size_t n_tx, SeededRng& rng);

std::vector<cplx> add_awgn(std::span<const cplx> signal, double variance, SeededRng& rng);

// In-place variant used on received blocks in the hot loop.
void add_awgn(ComplexMatrix& signal, double variance, SeededRng& rng);

enum class Modulation { bpsk, qpsk, psk8, qam16 };

std::string_view to_string(Modulation m);
Modulation parse_modulation(std::string_view name);

// Points are indexed by their Gray label read as an unsigned integer (first
// bit most significant), so the point index is the bit pattern.
class Constellation {
public:
    static const Constellation& get(Modulation m);

    Modulation modulation() const noexcept { return modulation_; }
    std::string_view name() const noexcept { return to_string(modulation_); }
    std::span<const cplx> points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }
    unsigned bits_per_symbol() const noexcept { return bits_per_symbol_; }
    bool is_psk() const noexcept { return modulation_ != Modulation::qam16; }

    cplx point(std::size_t index) const { return points_.at(index); }

private:
    Constellation(Modulation m, std::vector<cplx> points, unsigned bits);

    Modulation modulation_;
    std::vector<cplx> points_;
    unsigned bits_per_symbol_;
};

std::vector<cplx> modulate(std::span<const std::uint8_t> bits, const Constellation& c);

// Inverse of modulate for hard decisions: point indices back to bits.
std::vector<std::uint8_t> demap(std::span<const std::size_t> indices, const Constellation& c);

// argmax_s Re(stat * conj(s)); ties go to the lowest index.
std::size_t detect_blind_psk(cplx stat, const Constellation& c);

// argmin_s |stat - gain * s|^2; ties go to the lowest index.
std::size_t detect_coherent(cplx stat, double gain, const Constellation& c);

// ML hard decision for the scalar model stat = gain * s + noise. PSK ignores
// the gain (scale invariant); QAM needs it.
std::size_t detect(cplx stat, double gain, const Constellation& c);

}  // namespace dualzf
