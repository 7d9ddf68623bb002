#pragma once

#include <vector>

#include "dualzf/linalg.hpp"

namespace dualzf {

// Real linear system y = sum_l sqrt(P_l) s_l u_l Z + n, stream k read out as
// y v_k^T. Rows of U and V are the unit-norm transmit and receive filters.
struct LinearZFSystem {
    RealMatrix Z;  // n x m
    RealMatrix U;  // J x n
    RealMatrix V;  // J x m
    std::vector<double> P;
    double total_power = 0.0;

    std::size_t streams() const noexcept { return P.size(); }
};

// Throws DimensionMismatch when the shapes do not line up.
void validate(const LinearZFSystem& sys);

// max over l != k of |u_l Z v_k^T|; 0 for a single stream.
double check_zf(const LinearZFSystem& sys);

// P_k |u_k Z v_k^T|^2. k is zero-based.
double snr_original(const LinearZFSystem& sys, std::size_t k);

// SINR of stream k in the dual system (channel Z^T, transmit with v, receive
// with u), unit noise.
double snr_dual(const LinearZFSystem& sys, std::size_t k);

// Throws NotZFSystem when check_zf exceeds tol.
LinearZFSystem dualize(const LinearZFSystem& sys, double tol = 1e-8);

struct RealExpansion {
    RealMatrix U;     // 4 x 8, [I4 A]
    RealMatrix V;     // 4 x 4N
    RealMatrix Ghat;  // 4 x 2N
    RealMatrix Gbar;  // 4 x 2N
    RealMatrix A;     // 4 x 4
    RealMatrix D;     // 4N x 4N
    RealMatrix Gcal;  // 4N x 4, [Ghat Gbar]^T
    double g_norm = 0.0;
};

struct AlamoutiExpansion {
    LinearZFSystem system;
    RealExpansion parts;
};

// Real-valued model of the 2 x N Alamouti link. Streams are
// (Re s1, Im s1, Re s2, Im s2), each at power P; the channel is I2 (x) Ghat.
AlamoutiExpansion alamouti_real_expansion(const ComplexMatrix& G, double P);

// [Re x0, Im x0, Re x1, Im x1, ...] of a row-major complex matrix.
std::vector<double> to_real_interleaved(const ComplexMatrix& m);

}  // namespace dualzf
