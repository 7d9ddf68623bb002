#include "dualzf/p2p.hpp"

#include <cmath>

namespace dualzf {

namespace {

void require_power(double P) {
    if (!(P > 0.0)) throw ConfigError("P", "transmit power must be positive");
}

}  // namespace

ComplexMatrix alamouti_tx(cplx s1, cplx s2, double P) {
    require_power(P);
    return alamouti_embed(s1, s2) * cplx(std::sqrt(P / 2.0));
}

ComplexMatrix alamouti_equivalent(const ComplexMatrix& G) {
    if (G.rows() != 2) throw DimensionMismatch("Alamouti channel must have 2 rows");
    ComplexMatrix out(2 * G.cols(), 2);
    for (std::size_t i = 0; i < G.cols(); ++i) {
        out(2 * i, 0) = G(0, i);
        out(2 * i, 1) = G(1, i);
        out(2 * i + 1, 0) = -std::conj(G(1, i));
        out(2 * i + 1, 1) = std::conj(G(0, i));
    }
    return out;
}

P2PDecision alamouti_rx(const ComplexMatrix& Y, const ComplexMatrix& G, double P) {
    if (Y.rows() != 2 || G.rows() != 2 || Y.cols() != G.cols())
        throw DimensionMismatch("alamouti_rx expects matching 2 x N received block and channel");
    const double gn = fro_norm(G);
    if (!(gn > 0.0)) throw DegenerateChannel("alamouti_rx: zero channel");

    P2PDecision d;
    for (std::size_t i = 0; i < G.cols(); ++i) {
        const cplx y1 = Y(0, i);
        const cplx y2 = -std::conj(Y(1, i));
        // Rows of the per-antenna block are [g1, g2] and [-g2*, g1*].
        d.stats[0] += std::conj(G(0, i)) * y1 - G(1, i) * y2;
        d.stats[1] += std::conj(G(1, i)) * y1 + G(0, i) * y2;
    }
    d.stats[0] /= gn;
    d.stats[1] /= gn;
    d.gain = std::sqrt(P / 2.0) * gn;
    return d;
}

ComplexMatrix dual_alamouti_tx(cplx s1, cplx s2, const ComplexMatrix& H, double P) {
    require_power(P);
    if (H.cols() != 2) throw DimensionMismatch("dual Alamouti channel must be N x 2");
    const double hn = fro_norm(H);
    if (!(hn > 0.0)) throw DegenerateChannel("dual_alamouti_tx: zero channel");
    return alamouti_embed(s1, s2) * hermitian(H) * cplx(std::sqrt(P) / hn);
}

P2PDecision dual_alamouti_rx(const ComplexMatrix& R) {
    if (R.rows() != 2 || R.cols() != 2) throw DimensionMismatch("dual_alamouti_rx expects a 2 x 2 block");
    constexpr double inv_sqrt2 = 0.70710678118654752440;
    P2PDecision d;
    d.stats[0] = (R(0, 0) + std::conj(R(1, 1))) * inv_sqrt2;
    d.stats[1] = (R(0, 1) - std::conj(R(1, 0))) * inv_sqrt2;
    return d;
}

double dual_alamouti_gain(const ComplexMatrix& H, double P) {
    return std::sqrt(P / 2.0) * fro_norm(H);
}

DominantMode dominant_mode(const ComplexMatrix& H) {
    if (H.cols() != 2) throw DimensionMismatch("dominant_mode expects an N x 2 channel");
    // Largest eigenpair of the 2 x 2 Gram matrix H^H H = [[a, c], [c*, d]].
    double a = 0.0, d = 0.0;
    cplx c = 0.0;
    for (std::size_t i = 0; i < H.rows(); ++i) {
        a += std::norm(H(i, 0));
        d += std::norm(H(i, 1));
        c += std::conj(H(i, 0)) * H(i, 1);
    }
    if (!(a + d > 0.0)) throw DegenerateChannel("dominant_mode: zero channel");
    const double half_gap = 0.5 * (a - d);
    const double radius = std::sqrt(half_gap * half_gap + std::norm(c));
    const double lambda = 0.5 * (a + d) + radius;

    DominantMode m;
    // Pick the better conditioned of the two eigenvector formulas.
    cplx v0, v1;
    if (a >= d) {
        v0 = lambda - d;
        v1 = std::conj(c);
    } else {
        v0 = c;
        v1 = lambda - a;
    }
    double vn = std::sqrt(std::norm(v0) + std::norm(v1));
    if (!(vn > 0.0)) {
        v0 = 1.0;
        v1 = 0.0;
        vn = 1.0;
    }
    m.v = {v0 / vn, v1 / vn};
    m.sigma = std::sqrt(lambda);
    m.u.resize(H.rows());
    for (std::size_t i = 0; i < H.rows(); ++i) m.u[i] = (H(i, 0) * m.v[0] + H(i, 1) * m.v[1]) / m.sigma;
    return m;
}

SvdRound svd_baseline_round(cplx s, const ComplexMatrix& H, double P, SeededRng& rng) {
    require_power(P);
    const DominantMode mode = dominant_mode(H);
    const std::size_t n = H.rows();
    // x = sqrt(P) s u^H, y = x H + w, stat = y v.
    const double amp = std::sqrt(P);
    std::array<cplx, 2> y{};
    for (std::size_t j = 0; j < 2; ++j) {
        for (std::size_t i = 0; i < n; ++i) y[j] += amp * s * std::conj(mode.u[i]) * H(i, j);
        y[j] += rng.complex_normal();
    }
    return {y[0] * mode.v[0] + y[1] * mode.v[1], amp * mode.sigma};
}

}  // namespace dualzf
