#pragma once

#include <array>

#include "dualzf/channel.hpp"
#include "dualzf/downlink_ic.hpp"
#include "dualzf/p2p.hpp"

namespace dualzf {

struct BDPrecoders {
    std::array<ComplexMatrix, 2> W;  // N x 2, orthonormal columns
};

// Orthonormal basis (N x (N - r)) of the null space of A^T for an N x r
// channel A, i.e. vectors w with A^T w = 0.
ComplexMatrix transpose_null_space(const ComplexMatrix& A);

// W[k] spans the 2-dimensional subspace of the other user's null space that
// captures the most of user k's own channel. Needs N >= 4.
BDPrecoders bd_precoders(const ChannelMatrices& H);

struct BDRound {
    std::array<P2PDecision, 2> users;
    std::array<ComplexMatrix, 2> G_eq;  // W[k]^T H[k], 2 x 2
};

// X = sqrt(P/4) sum_k S_k W_k^T; each user runs coherent Alamouti combining on
// its equivalent channel. Receive noise is drawn from rng.
BDRound bd_round(const UserSymbols& s, const ChannelMatrices& H, const BDPrecoders& W, double P, SeededRng& rng);

BDRound bd_round(const UserSymbols& s, const ChannelMatrices& H, double P, SeededRng& rng);

// argmax_k ||H_k||, ties to user 0.
std::size_t tdma_schedule(const ChannelMatrices& H);

struct TdmaRound {
    std::size_t user = 0;
    P2PDecision decision;  // gain holds sqrt(P/2) ||H_user||
    std::array<std::size_t, 2> detected{};
};

TdmaRound tdma_round(const std::array<cplx, 2>& s, const ChannelMatrices& H, double P, const Constellation& c,
                     SeededRng& rng);

}  // namespace dualzf
