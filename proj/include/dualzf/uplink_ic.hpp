#pragma once

#include <array>

#include "dualzf/linalg.hpp"

namespace dualzf {

// How the second filtering stage treats the coloured noise left by the
// user-separating stage. `matched` is the plain conjugate filter of the
// equivalent channel; `projection` whitens first, which makes the stage the
// orthogonal projection onto the interference-free subspace followed by
// maximum ratio combining.
enum class SymbolSepKind { matched, projection };

struct SymbolSepFilter {
    ComplexMatrix F;  // 2 x 2(N-1)
    double alpha = 0.0;
};

// Z-bar for one user's 2 x N channel: 2(N-1) x 2N, annihilates that user's
// stacked equivalent channel.
ComplexMatrix build_user_sep(const ComplexMatrix& G);

// F = alpha K with K = M^H (matched) or M^H (Zbar Zbar^H)^-1 (projection),
// M = Zbar_other Gtilde_k, and alpha = sqrt(2) / ||K Zbar_other||.
SymbolSepFilter build_sym_sep(const ComplexMatrix& Zbar_other, const ComplexMatrix& Gtilde_k,
                              SymbolSepKind kind = SymbolSepKind::matched);

// tr(M^H (Zbar Zbar^H)^-1 M): the per-symbol SNR of the projection filter is
// P b / 8.
double projected_gain(const ComplexMatrix& Zbar_other, const ComplexMatrix& Gtilde_k);

// ||M||^4 / ||M^H Zbar||^2: the matched filter's SNR is P b / 8.
double matched_gain(const ComplexMatrix& Zbar_other, const ComplexMatrix& Gtilde_k);

struct UplinkFilters {
    std::array<ComplexMatrix, 2> Zbar;
    std::array<ComplexMatrix, 2> Gtilde;
    std::array<SymbolSepFilter, 2> sym;
};

UplinkFilters build_uplink_filters(const ComplexMatrix& G1, const ComplexMatrix& G2,
                                   SymbolSepKind kind = SymbolSepKind::matched);

struct UplinkDecision {
    std::array<std::array<cplx, 2>, 2> stats{};  // [user][symbol]
    std::array<double, 2> gain{};                // signal coefficient per user
};

// Stacked received vector ybar = sqrt(P/4) (Gtilde1 s1 + Gtilde2 s2) + n
// (length 2N) from the two users' 2 x N channels.
UplinkDecision uplink_ic_receive(std::span<const cplx> ybar, const UplinkFilters& filters, double P);

UplinkDecision uplink_ic_receive(std::span<const cplx> ybar, const ComplexMatrix& G1, const ComplexMatrix& G2,
                                 double P, SymbolSepKind kind = SymbolSepKind::matched);

}  // namespace dualzf
