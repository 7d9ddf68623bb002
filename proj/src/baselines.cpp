#include "dualzf/baselines.hpp"

#include <cmath>

namespace dualzf {

namespace {

constexpr double kDependent = 1e-10;

// Modified Gram-Schmidt with one reorthogonalization pass. Appends the
// normalized residual of v to basis when it is not already spanned.
bool orthonormal_append(std::vector<std::vector<cplx>>& basis, std::vector<cplx> v) {
    const double start = std::sqrt([&] {
        double e = 0.0;
        for (const auto& x : v) e += std::norm(x);
        return e;
    }());
    if (!(start > 0.0)) return false;
    for (int pass = 0; pass < 2; ++pass) {
        for (const auto& q : basis) {
            cplx proj = 0.0;
            for (std::size_t i = 0; i < v.size(); ++i) proj += std::conj(q[i]) * v[i];
            for (std::size_t i = 0; i < v.size(); ++i) v[i] -= proj * q[i];
        }
    }
    double e = 0.0;
    for (const auto& x : v) e += std::norm(x);
    const double norm = std::sqrt(e);
    if (norm < kDependent * start) return false;
    for (auto& x : v) x /= norm;
    basis.push_back(std::move(v));
    return true;
}

}  // namespace

ComplexMatrix transpose_null_space(const ComplexMatrix& A) {
    const std::size_t n = A.rows();
    const std::size_t r = A.cols();
    // A^T w = 0 iff w is orthogonal to every column of conj(A).
    std::vector<std::vector<cplx>> basis;
    for (std::size_t c = 0; c < r; ++c) {
        std::vector<cplx> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = std::conj(A(i, c));
        if (!orthonormal_append(basis, std::move(v))) throw DegenerateChannel("channel columns are linearly dependent");
    }
    for (std::size_t e = 0; e < n && basis.size() < n; ++e) {
        std::vector<cplx> v(n);
        v[e] = 1.0;
        orthonormal_append(basis, std::move(v));
    }
    if (basis.size() != n) throw SingularMatrix("failed to complete an orthonormal basis");
    ComplexMatrix q(n, n - r);
    for (std::size_t j = r; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) q(i, j - r) = basis[j][i];
    return q;
}

BDPrecoders bd_precoders(const ChannelMatrices& H) {
    const std::size_t n = H[0].rows();
    if (n < 4) throw ConfigError("n-tx", "block diagonalization needs at least 4 transmit antennas");
    if (H[1].rows() != n || H[0].cols() != 2 || H[1].cols() != 2)
        throw DimensionMismatch("both channels must be N x 2");
    BDPrecoders out;
    for (std::size_t k = 0; k < 2; ++k) {
        const ComplexMatrix q = transpose_null_space(H[1 - k]);
        // ||a^T Q^T H_k|| is largest when conj(a) spans the columns of Q^T H_k.
        const ComplexMatrix mq = transpose(q) * H[k];
        std::vector<std::vector<cplx>> cols;
        for (std::size_t c = 0; c < 2; ++c) {
            std::vector<cplx> v(mq.rows());
            for (std::size_t i = 0; i < mq.rows(); ++i) v[i] = mq(i, c);
            if (!orthonormal_append(cols, std::move(v)))
                throw DegenerateChannel("own channel loses rank in the other user's null space");
        }
        ComplexMatrix a(mq.rows(), 2);
        for (std::size_t c = 0; c < 2; ++c)
            for (std::size_t i = 0; i < mq.rows(); ++i) a(i, c) = std::conj(cols[c][i]);
        out.W[k] = q * a;
    }
    return out;
}

BDRound bd_round(const UserSymbols& s, const ChannelMatrices& H, const BDPrecoders& W, double P, SeededRng& rng) {
    if (!(P > 0.0)) throw ConfigError("P", "transmit power must be positive");
    const cplx amp(std::sqrt(P / 4.0));
    ComplexMatrix x = alamouti_embed(s[0][0], s[0][1]) * transpose(W.W[0]) * amp;
    x += alamouti_embed(s[1][0], s[1][1]) * transpose(W.W[1]) * amp;

    BDRound out;
    for (std::size_t k = 0; k < 2; ++k) {
        ComplexMatrix r = x * H[k];
        add_awgn(r, 1.0, rng);
        out.G_eq[k] = transpose(W.W[k]) * H[k];
        // Per-user Alamouti at power P/2 gives the sqrt(P/4) amplitude above.
        out.users[k] = alamouti_rx(r, out.G_eq[k], P / 2.0);
    }
    return out;
}

BDRound bd_round(const UserSymbols& s, const ChannelMatrices& H, double P, SeededRng& rng) {
    return bd_round(s, H, bd_precoders(H), P, rng);
}

std::size_t tdma_schedule(const ChannelMatrices& H) {
    return fro_norm_sq(H[1]) > fro_norm_sq(H[0]) ? 1 : 0;
}

TdmaRound tdma_round(const std::array<cplx, 2>& s, const ChannelMatrices& H, double P, const Constellation& c,
                     SeededRng& rng) {
    TdmaRound out;
    out.user = tdma_schedule(H);
    const ComplexMatrix& h = H[out.user];
    ComplexMatrix r = dual_alamouti_tx(s[0], s[1], h, P) * h;
    add_awgn(r, 1.0, rng);
    out.decision = dual_alamouti_rx(r);
    // Only the QAM detector consumes this; PSK detection stays blind.
    out.decision.gain = dual_alamouti_gain(h, P);
    for (std::size_t j = 0; j < 2; ++j) out.detected[j] = detect(out.decision.stats[j], out.decision.gain, c);
    return out;
}

}  // namespace dualzf
