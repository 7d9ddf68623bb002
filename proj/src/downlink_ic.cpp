#include "dualzf/downlink_ic.hpp"

#include <cmath>

namespace dualzf {

namespace {

constexpr double kDegenerate = 1e-12;

void require_channel(const ComplexMatrix& H) {
    if (H.cols() != 2) throw DimensionMismatch("downlink channel must be N x 2");
    if (H.rows() < 2) throw ConfigError("n-tx", "downlink IC needs N >= 2 transmit antennas");
}

double row_energy(const ComplexMatrix& H, std::size_t i) {
    const double e = std::norm(H(i, 0)) + std::norm(H(i, 1));
    if (e < kDegenerate) throw DegenerateChannel("transmit antenna " + std::to_string(i) + " has a vanishing channel");
    return e;
}

ComplexMatrix precoder_kernel(const ComplexMatrix& Bt, const ComplexMatrix& M, PrecoderKind kind) {
    if (kind == PrecoderKind::matched) return hermitian(M);
    try {
        return hermitian(solve_hpd(Bt * hermitian(Bt), M));
    } catch (const SingularMatrix& e) {
        throw DegenerateChannel(e.what());
    }
}

}  // namespace

ComplexMatrix build_user_sep_precoder(const ComplexMatrix& H_other) {
    require_channel(H_other);
    const std::size_t n = H_other.rows();
    ComplexMatrix b(2 * (n - 1), n);
    const double en = row_energy(H_other, n - 1);
    for (std::size_t r = 0; r + 1 < n; ++r) {
        const double er = row_energy(H_other, r);
        for (std::size_t j = 0; j < 2; ++j) {
            b(2 * r + j, r) = std::conj(H_other(r, j)) / er;
            b(2 * r + j, n - 1) = -std::conj(H_other(n - 1, j)) / en;
        }
    }
    return b;
}

ComplexMatrix build_htilde(const ComplexMatrix& H) {
    require_channel(H);
    ComplexMatrix out(2 * H.rows(), 2);
    for (std::size_t i = 0; i < H.rows(); ++i) {
        out(2 * i, 0) = H(i, 0);
        out(2 * i, 1) = H(i, 1);
        out(2 * i + 1, 0) = -std::conj(H(i, 1));
        out(2 * i + 1, 1) = std::conj(H(i, 0));
    }
    return out;
}

ComplexMatrix build_btilde(const ComplexMatrix& H) {
    require_channel(H);
    const std::size_t n = H.rows();
    const ComplexMatrix ht = build_htilde(H);
    ComplexMatrix last = hermitian(ht.block(2 * (n - 1), 0, 2, 2)) * cplx(-1.0 / row_energy(H, n - 1));
    ComplexMatrix out(2 * (n - 1), 2 * n);
    for (std::size_t r = 0; r + 1 < n; ++r) {
        out.set_block(2 * r, 2 * r, hermitian(ht.block(2 * r, 0, 2, 2)) * cplx(1.0 / row_energy(H, r)));
        out.set_block(2 * r, 2 * (n - 1), last);
    }
    return out;
}

IcMatrices build_ic_matrices(const ChannelMatrices& H, std::size_t k) {
    if (k > 1) throw DimensionMismatch("user index must be 0 or 1");
    if (H[0].rows() != H[1].rows()) throw DimensionMismatch("users must share the transmit antenna count");
    return {build_btilde(H[1 - k]), build_htilde(H[k])};
}

namespace {

SymbolSepPrecoder symbol_sep_from(const IcMatrices& ic, PrecoderKind kind) {
    const ComplexMatrix m = ic.Btilde * ic.Htilde;
    if (fro_norm_sq(m) < kDegenerate) throw DegenerateChannel("equivalent channel after user separation vanishes");
    const ComplexMatrix kern = precoder_kernel(ic.Btilde, m, kind);
    const double norm = fro_norm(kern * ic.Btilde);
    if (!(norm > 0.0)) throw DegenerateChannel("symbol separating precoder vanishes");
    SymbolSepPrecoder out;
    out.beta = std::sqrt(2.0) / norm;
    out.E = kern * cplx(out.beta);
    return out;
}

}  // namespace

SymbolSepPrecoder build_symbol_sep_precoder(const ChannelMatrices& H, std::size_t k, PrecoderKind kind) {
    return symbol_sep_from(build_ic_matrices(H, k), kind);
}

double user_snr_b(const ChannelMatrices& H, std::size_t k) {
    const IcMatrices ic = build_ic_matrices(H, k);
    return projected_gain(ic.Btilde, ic.Htilde);
}

double effective_snr_b(const ChannelMatrices& H, std::size_t k, PrecoderKind kind) {
    if (kind == PrecoderKind::projection) return user_snr_b(H, k);
    const IcMatrices ic = build_ic_matrices(H, k);
    return matched_gain(ic.Btilde, ic.Htilde);
}

PowerAllocation optimal_power_alloc(double b1, double b2) {
    if (!(b1 > 0.0) || !(b2 > 0.0)) throw DegenerateChannel("power allocation needs positive SNR statistics");
    const double s = b1 + b2;
    return {2.0 * b2 / s, 2.0 * b1 / s};
}

double user_snr(double P, double c_sq, double b) {
    return P * c_sq * b / 8.0;
}

DownlinkPrecoders build_downlink_precoders(const ChannelMatrices& H, PrecoderKind kind) {
    DownlinkPrecoders pre;
    pre.kind = kind;
    for (std::size_t k = 0; k < 2; ++k) {
        pre.Bbar[k] = build_user_sep_precoder(H[k]);
        pre.ic[k] = build_ic_matrices(H, k);
        pre.sym[k] = symbol_sep_from(pre.ic[k], kind);
    }
    return pre;
}

ComplexMatrix downlink_ic_tx(const UserSymbols& s, const DownlinkPrecoders& pre, double P,
                             const PowerAllocation& alloc) {
    if (!(P > 0.0)) throw ConfigError("P", "transmit power must be positive");
    if (alloc.c1_sq < 0.0 || alloc.c2_sq < 0.0 || std::abs(alloc.c1_sq + alloc.c2_sq - 2.0) > 1e-9)
        throw ConfigError("alloc", "power allocation must be non-negative with c1^2 + c2^2 = 2");
    ComplexMatrix x;
    for (std::size_t k = 0; k < 2; ++k) {
        // User k's branch goes through the precoder built from the other
        // user's channel, which that user's combiner cancels.
        const double scale = std::sqrt(P / 2.0 * alloc.c_sq(k));
        ComplexMatrix branch = alamouti_embed(s[k][0], s[k][1]) * pre.sym[k].E * pre.Bbar[1 - k] * cplx(scale);
        if (k == 0)
            x = std::move(branch);
        else
            x += branch;
    }
    return x;
}

ComplexMatrix downlink_ic_tx(const UserSymbols& s, const ChannelMatrices& H, double P, const PowerAllocation& alloc,
                             PrecoderKind kind) {
    return downlink_ic_tx(s, build_downlink_precoders(H, kind), P, alloc);
}

std::array<cplx, 2> downlink_ic_rx(const ComplexMatrix& R) {
    if (R.rows() != 2 || R.cols() != 2) throw DimensionMismatch("downlink_ic_rx expects a 2 x 2 block");
    return {R(0, 0) + std::conj(R(1, 1)), R(0, 1) - std::conj(R(1, 0))};
}

double downlink_signal_coefficient(const DownlinkPrecoders& pre, std::size_t k, double P, double c_sq) {
    const ComplexMatrix em = pre.sym[k].E * (pre.ic[k].Btilde * pre.ic[k].Htilde);
    return std::sqrt(P / 2.0 * c_sq) * em(0, 0).real();
}

}  // namespace dualzf
