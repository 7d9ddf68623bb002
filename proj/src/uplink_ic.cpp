#include "dualzf/uplink_ic.hpp"

#include <cmath>

#include "dualzf/p2p.hpp"

namespace dualzf {

namespace {

constexpr double kDegenerate = 1e-12;

ComplexMatrix as_column(std::span<const cplx> v) {
    ComplexMatrix m(v.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
    return m;
}

ComplexMatrix combining_kernel(const ComplexMatrix& Zbar, const ComplexMatrix& M, SymbolSepKind kind) {
    if (kind == SymbolSepKind::matched) return hermitian(M);
    try {
        return hermitian(solve_hpd(Zbar * hermitian(Zbar), M));
    } catch (const SingularMatrix& e) {
        throw DegenerateChannel(e.what());
    }
}

}  // namespace

ComplexMatrix build_user_sep(const ComplexMatrix& G) {
    if (G.rows() != 2) throw DimensionMismatch("user channel must be 2 x N");
    const std::size_t n = G.cols();
    if (n < 2) throw ConfigError("n-tx", "user separation needs N >= 2 receive antennas");

    const ComplexMatrix gt = alamouti_equivalent(G);
    std::vector<ComplexMatrix> blocks(n);
    for (std::size_t i = 0; i < n; ++i) {
        const ComplexMatrix gi = gt.block(2 * i, 0, 2, 2);
        const double e = fro_norm_sq(gi);
        if (e < kDegenerate) throw DegenerateChannel("per-antenna channel block vanishes");
        blocks[i] = hermitian(gi) * cplx(2.0 / e);
    }
    ComplexMatrix z(2 * (n - 1), 2 * n);
    const ComplexMatrix last = blocks[n - 1] * cplx(-1.0);
    for (std::size_t r = 0; r + 1 < n; ++r) {
        z.set_block(2 * r, 2 * r, blocks[r]);
        z.set_block(2 * r, 2 * (n - 1), last);
    }
    return z;
}

SymbolSepFilter build_sym_sep(const ComplexMatrix& Zbar_other, const ComplexMatrix& Gtilde_k, SymbolSepKind kind) {
    const ComplexMatrix m = Zbar_other * Gtilde_k;
    if (fro_norm_sq(m) < kDegenerate) throw DegenerateChannel("equivalent channel after user separation vanishes");
    const ComplexMatrix k = combining_kernel(Zbar_other, m, kind);
    const double norm = fro_norm(k * Zbar_other);
    if (!(norm > 0.0)) throw DegenerateChannel("symbol separating filter vanishes");
    SymbolSepFilter out;
    out.alpha = std::sqrt(2.0) / norm;
    out.F = k * cplx(out.alpha);
    return out;
}

double projected_gain(const ComplexMatrix& Zbar_other, const ComplexMatrix& Gtilde_k) {
    const ComplexMatrix m = Zbar_other * Gtilde_k;
    try {
        return trace_real(hermitian(m) * solve_hpd(Zbar_other * hermitian(Zbar_other), m));
    } catch (const SingularMatrix& e) {
        throw DegenerateChannel(e.what());
    }
}

double matched_gain(const ComplexMatrix& Zbar_other, const ComplexMatrix& Gtilde_k) {
    const ComplexMatrix m = Zbar_other * Gtilde_k;
    const double mm = fro_norm_sq(m);
    const double den = fro_norm_sq(hermitian(m) * Zbar_other);
    if (!(den > 0.0)) throw DegenerateChannel("equivalent channel after user separation vanishes");
    return mm * mm / den;
}

UplinkFilters build_uplink_filters(const ComplexMatrix& G1, const ComplexMatrix& G2, SymbolSepKind kind) {
    if (G1.rows() != 2 || G2.rows() != 2 || G1.cols() != G2.cols())
        throw DimensionMismatch("uplink channels must both be 2 x N");
    UplinkFilters f;
    f.Zbar = {build_user_sep(G1), build_user_sep(G2)};
    f.Gtilde = {alamouti_equivalent(G1), alamouti_equivalent(G2)};
    for (std::size_t k = 0; k < 2; ++k) f.sym[k] = build_sym_sep(f.Zbar[1 - k], f.Gtilde[k], kind);
    return f;
}

UplinkDecision uplink_ic_receive(std::span<const cplx> ybar, const UplinkFilters& filters, double P) {
    if (ybar.size() != filters.Gtilde[0].rows()) throw DimensionMismatch("received vector must have length 2N");
    const ComplexMatrix y = as_column(ybar);
    const double amp = std::sqrt(P / 4.0);
    UplinkDecision d;
    for (std::size_t k = 0; k < 2; ++k) {
        const ComplexMatrix& zo = filters.Zbar[1 - k];
        const ComplexMatrix& f = filters.sym[k].F;
        const ComplexMatrix out = f * (zo * y);
        d.stats[k] = {out(0, 0), out(1, 0)};
        d.gain[k] = amp * (f * (zo * filters.Gtilde[k]))(0, 0).real();
    }
    return d;
}

UplinkDecision uplink_ic_receive(std::span<const cplx> ybar, const ComplexMatrix& G1, const ComplexMatrix& G2,
                                 double P, SymbolSepKind kind) {
    return uplink_ic_receive(ybar, build_uplink_filters(G1, G2, kind), P);
}

}  // namespace dualzf
