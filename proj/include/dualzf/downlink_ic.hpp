#pragma once

#include <array>

#include "dualzf/linalg.hpp"
#include "dualzf/uplink_ic.hpp"

namespace dualzf {

// Both users' N x 2 channels; H[k](i, j) is transmit antenna i to receive
// antenna j of user k. User indices are zero-based throughout.
using ChannelMatrices = std::array<ComplexMatrix, 2>;

// Precoder kind shared with the uplink receiver; the downlink precoder of one
// kind is the transposed-channel image of the uplink filter of that kind.
using PrecoderKind = SymbolSepKind;

// B-bar built from the other user's channel: 2(N-1) x N. Row block r holds
// h_r^H / ||h_r||^2 in column r and -h_N^H / ||h_N||^2 in column N.
ComplexMatrix build_user_sep_precoder(const ComplexMatrix& H_other);

// Stacked Alamouti blocks [[h_i1, h_i2], [-h_i2*, h_i1*]] of an N x 2
// channel, 2N x 2.
ComplexMatrix build_htilde(const ComplexMatrix& H);

// B-tilde of an N x 2 channel: 2(N-1) x 2N with blocks Htilde_i^H / ||h_i||^2.
ComplexMatrix build_btilde(const ComplexMatrix& H);

struct IcMatrices {
    ComplexMatrix Btilde;  // of the other user
    ComplexMatrix Htilde;  // of user k
};

IcMatrices build_ic_matrices(const ChannelMatrices& H, std::size_t k);

struct SymbolSepPrecoder {
    ComplexMatrix E;  // 2 x 2(N-1)
    double beta = 0.0;
};

// E = beta K with K = M^H (matched) or M^H (Btilde Btilde^H)^-1 (projection),
// M = Btilde_other Htilde_k, beta = sqrt(2) / ||K Btilde_other||.
SymbolSepPrecoder build_symbol_sep_precoder(const ChannelMatrices& H, std::size_t k,
                                            PrecoderKind kind = PrecoderKind::matched);

// tr(M^H (Btilde Btilde^H)^-1 M).
double user_snr_b(const ChannelMatrices& H, std::size_t k);

// The b for which SNR = P c^2 b / 8 holds with the given precoder kind:
// user_snr_b for projection, ||M||^4 / ||M^H Btilde||^2 for matched. The two
// coincide when N = 2.
double effective_snr_b(const ChannelMatrices& H, std::size_t k, PrecoderKind kind);

struct PowerAllocation {
    double c1_sq = 1.0;
    double c2_sq = 1.0;

    double c_sq(std::size_t k) const { return k == 0 ? c1_sq : c2_sq; }
};

inline constexpr PowerAllocation kEqualPower{1.0, 1.0};

// Max-min allocation: c_k^2 = 2 b_other / (b1 + b2).
PowerAllocation optimal_power_alloc(double b1, double b2);

// P c_k^2 b_k / 8
double user_snr(double P, double c_sq, double b);

struct DownlinkPrecoders {
    std::array<ComplexMatrix, 2> Bbar;    // Bbar[k] is built from user k's channel
    std::array<IcMatrices, 2> ic;         // ic[k] = (Btilde of other, Htilde of k)
    std::array<SymbolSepPrecoder, 2> sym;
    PrecoderKind kind = PrecoderKind::matched;
};

DownlinkPrecoders build_downlink_precoders(const ChannelMatrices& H, PrecoderKind kind = PrecoderKind::matched);

using UserSymbols = std::array<std::array<cplx, 2>, 2>;  // [user][symbol]

// X = sqrt(P/2) (c1 S1 E1 Bbar2 + c2 S2 E2 Bbar1), 2 x N.
ComplexMatrix downlink_ic_tx(const UserSymbols& s, const DownlinkPrecoders& pre, double P,
                             const PowerAllocation& alloc = kEqualPower);

ComplexMatrix downlink_ic_tx(const UserSymbols& s, const ChannelMatrices& H, double P,
                             const PowerAllocation& alloc = kEqualPower, PrecoderKind kind = PrecoderKind::matched);

// Blind combiner on user k's 2 x 2 block: r1 = R11 + R22*, r2 = R12 - R21*.
// With unit receive noise the output noise is CN(0, 2).
std::array<cplx, 2> downlink_ic_rx(const ComplexMatrix& R);

// Scalar multiplying s_j^(k) at the output of user k's combiner.
double downlink_signal_coefficient(const DownlinkPrecoders& pre, std::size_t k, double P, double c_sq);

}  // namespace dualzf
