#include "dualzf/duality.hpp"

#include <algorithm>
#include <cmath>

namespace dualzf {

namespace {

double row_dot(const RealMatrix& a, std::size_t ra, const RealMatrix& b, std::size_t rb) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.cols(); ++i) acc += a(ra, i) * b(rb, i);
    return acc;
}

// Row l of U times Z, as a 1 x m matrix.
RealMatrix tx_image(const LinearZFSystem& sys, std::size_t l) {
    RealMatrix u(1, sys.U.cols());
    for (std::size_t i = 0; i < u.cols(); ++i) u(0, i) = sys.U(l, i);
    return u * sys.Z;
}

// u_l Z v_k^T for all (l, k).
RealMatrix cross_gains(const LinearZFSystem& sys) {
    const RealMatrix uz = sys.U * sys.Z;
    RealMatrix out(sys.streams(), sys.streams());
    for (std::size_t l = 0; l < sys.streams(); ++l)
        for (std::size_t k = 0; k < sys.streams(); ++k) out(l, k) = row_dot(uz, l, sys.V, k);
    return out;
}

void require_stream(const LinearZFSystem& sys, std::size_t k) {
    if (k >= sys.streams())
        throw DimensionMismatch("stream index " + std::to_string(k) + " out of range for " +
                                std::to_string(sys.streams()) + " streams");
}

}  // namespace

void validate(const LinearZFSystem& sys) {
    const std::size_t j = sys.P.size();
    if (sys.U.rows() != j || sys.V.rows() != j) throw DimensionMismatch("filter banks must have one row per stream");
    if (sys.U.cols() != sys.Z.rows()) throw DimensionMismatch("transmit filter length must equal Z rows");
    if (sys.V.cols() != sys.Z.cols()) throw DimensionMismatch("receive filter length must equal Z cols");
}

double check_zf(const LinearZFSystem& sys) {
    validate(sys);
    const RealMatrix g = cross_gains(sys);
    double worst = 0.0;
    for (std::size_t l = 0; l < g.rows(); ++l)
        for (std::size_t k = 0; k < g.cols(); ++k)
            if (l != k) worst = std::max(worst, std::abs(g(l, k)));
    return worst;
}

double snr_original(const LinearZFSystem& sys, std::size_t k) {
    validate(sys);
    require_stream(sys, k);
    const double g = row_dot(tx_image(sys, k), 0, sys.V, k);
    return sys.P[k] * g * g;
}

double snr_dual(const LinearZFSystem& sys, std::size_t k) {
    validate(sys);
    require_stream(sys, k);
    // v_l Z^T u_k^T is the same number as u_k Z v_l^T.
    const RealMatrix uz = tx_image(sys, k);
    double signal = 0.0;
    double interference = 0.0;
    for (std::size_t l = 0; l < sys.streams(); ++l) {
        const double g = row_dot(uz, 0, sys.V, l);
        if (l == k)
            signal = sys.P[l] * g * g;
        else
            interference += sys.P[l] * g * g;
    }
    return signal / (interference + 1.0);
}

LinearZFSystem dualize(const LinearZFSystem& sys, double tol) {
    const double residual = check_zf(sys);
    if (residual > tol) throw NotZFSystem("ZF residual " + std::to_string(residual) + " exceeds tolerance");
    LinearZFSystem out;
    out.Z = transpose(sys.Z);
    out.U = sys.V;
    out.V = sys.U;
    out.P = sys.P;
    out.total_power = sys.total_power;
    return out;
}

AlamoutiExpansion alamouti_real_expansion(const ComplexMatrix& G, double P) {
    if (G.rows() != 2 || G.cols() < 1) throw DimensionMismatch("Alamouti expansion expects a 2 x N channel");
    const double gn = fro_norm(G);
    if (!(gn > 0.0)) throw DegenerateChannel("Alamouti expansion of a zero channel");
    const std::size_t n = G.cols();

    RealExpansion x;
    x.g_norm = gn;
    x.Ghat = RealMatrix(4, 2 * n);
    x.Gbar = RealMatrix(4, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        const double a1 = G(0, i).real(), b1 = G(0, i).imag();
        const double a2 = G(1, i).real(), b2 = G(1, i).imag();
        const std::size_t c = 2 * i;
        x.Ghat.set_block(0, c, RealMatrix{{a1, b1}, {-b1, a1}, {a2, b2}, {-b2, a2}});
        x.Gbar.set_block(0, c, RealMatrix{{-a2, b2}, {-b2, -a2}, {a1, -b1}, {b1, a1}});
    }
    x.A = RealMatrix{{0, 0, 1, 0}, {0, 0, 0, -1}, {-1, 0, 0, 0}, {0, 1, 0, 0}};

    x.U = RealMatrix(4, 8);
    x.U.set_block(0, 0, RealMatrix::identity(4));
    x.U.set_block(0, 4, x.A);

    x.D = RealMatrix::identity(4 * n);
    for (std::size_t i = 0; i < n; ++i) x.D(2 * n + 2 * i, 2 * n + 2 * i) = -1.0;

    RealMatrix stacked(4, 4 * n);
    stacked.set_block(0, 0, x.Ghat);
    stacked.set_block(0, 2 * n, x.Gbar);
    x.Gcal = transpose(stacked);
    x.V = transpose(x.D * x.Gcal) * (1.0 / gn);

    AlamoutiExpansion out;
    out.system.Z = kron_identity(2, x.Ghat);
    out.system.U = x.U * (1.0 / std::sqrt(2.0));
    out.system.V = x.V;
    out.system.P.assign(4, P);
    out.system.total_power = 4.0 * P;
    out.parts = std::move(x);
    return out;
}

std::vector<double> to_real_interleaved(const ComplexMatrix& m) {
    std::vector<double> out;
    out.reserve(2 * m.size());
    for (const auto& v : m.data()) {
        out.push_back(v.real());
        out.push_back(v.imag());
    }
    return out;
}

}  // namespace dualzf
