#pragma once

#include <array>

#include "dualzf/channel.hpp"
#include "dualzf/linalg.hpp"

namespace dualzf {

// Two decision statistics and the real scalar gain they carry, stat_j =
// gain * s_j + noise. Blind receivers report gain 0 (unknown to them).
struct P2PDecision {
    std::array<cplx, 2> stats{};
    double gain = 0.0;
};

// sqrt(P/2) [[s1, s2], [-s2*, s1*]]
ComplexMatrix alamouti_tx(cplx s1, cplx s2, double P);

// Stacked per-antenna blocks [[g1i, g2i], [-g2i*, g1i*]] of a 2 x N channel,
// giving a 2N x 2 matrix.
ComplexMatrix alamouti_equivalent(const ComplexMatrix& G);

// Coherent combining of Y = X G + W (Y, G are 2 x N). Noise stays CN(0, 1).
P2PDecision alamouti_rx(const ComplexMatrix& Y, const ComplexMatrix& G, double P);

// sqrt(P) S H^H / ||H|| for an N x 2 channel H; returns 2 x N.
ComplexMatrix dual_alamouti_tx(cplx s1, cplx s2, const ComplexMatrix& H, double P);

// Blind two-addition combiner on the 2 x 2 block R = X H + W.
P2PDecision dual_alamouti_rx(const ComplexMatrix& R);

// sqrt(P/2) ||H||, the scalar a dual Alamouti receiver sees.
double dual_alamouti_gain(const ComplexMatrix& H, double P);

// Dominant singular triple of an N x 2 channel: H v = sigma u.
struct DominantMode {
    double sigma = 0.0;
    std::vector<cplx> u;  // length N, unit norm
    std::array<cplx, 2> v{};
};

DominantMode dominant_mode(const ComplexMatrix& H);

struct SvdRound {
    cplx stat;
    double gain = 0.0;
};

// One slot of beamforming on the strongest eigen-direction with matched
// filtering at the receiver; the noise is drawn from rng.
SvdRound svd_baseline_round(cplx s, const ComplexMatrix& H, double P, SeededRng& rng);

}  // namespace dualzf
