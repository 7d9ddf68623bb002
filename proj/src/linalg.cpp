#include "dualzf/linalg.hpp"

#include <algorithm>
#include <limits>

namespace dualzf {

RealMatrix kron_identity(std::size_t n, const RealMatrix& m) {
    RealMatrix out(n * m.rows(), n * m.cols());
    for (std::size_t i = 0; i < n; ++i) out.set_block(i * m.rows(), i * m.cols(), m);
    return out;
}

ComplexMatrix alamouti_embed(cplx s1, cplx s2) {
    return ComplexMatrix{{s1, s2}, {-std::conj(s2), std::conj(s1)}};
}

bool is_alamouti(const ComplexMatrix& m, double tol) {
    if (m.rows() != 2 || m.cols() != 2) throw DimensionMismatch("is_alamouti expects a 2x2 matrix");
    return std::abs(m(1, 0) + std::conj(m(0, 1))) <= tol && std::abs(m(1, 1) - std::conj(m(0, 0))) <= tol;
}

bool is_block_alamouti(const ComplexMatrix& m, double tol) {
    if (m.rows() % 2 != 0 || m.cols() % 2 != 0) throw DimensionMismatch("block Alamouti check needs even dims");
    for (std::size_t r = 0; r < m.rows(); r += 2)
        for (std::size_t c = 0; c < m.cols(); c += 2)
            if (!is_alamouti(m.block(r, c, 2, 2), tol)) return false;
    return true;
}

ComplexMatrix solve_hpd(const ComplexMatrix& a, const ComplexMatrix& b) {
    const std::size_t n = a.rows();
    if (a.cols() != n) throw DimensionMismatch("solve_hpd: A must be square");
    if (b.rows() != n) throw DimensionMismatch("solve_hpd: B row count must match A");

    // A = L L^H, L lower triangular with real positive diagonal.
    ComplexMatrix l(n, n);
    double max_pivot = 0.0;
    double min_pivot = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j).real();
        for (std::size_t k = 0; k < j; ++k) d -= std::norm(l(j, k));
        max_pivot = std::max(max_pivot, d);
        min_pivot = std::min(min_pivot, d);
        if (!(d > 0.0) || min_pivot < 1e-12 * max_pivot)
            throw SingularMatrix("solve_hpd: matrix is numerically singular at pivot " + std::to_string(j));
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            cplx s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
            l(i, j) = s / ljj;
        }
    }
    // Pivots decrease as the factorization proceeds, so recheck the ratio
    // against the final maximum.
    if (min_pivot < 1e-12 * max_pivot) throw SingularMatrix("solve_hpd: matrix is numerically singular");

    ComplexMatrix x = b;
    for (std::size_t c = 0; c < x.cols(); ++c) {
        for (std::size_t i = 0; i < n; ++i) {
            cplx s = x(i, c);
            for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * x(k, c);
            x(i, c) = s / l(i, i);
        }
        for (std::size_t ii = n; ii-- > 0;) {
            cplx s = x(ii, c);
            for (std::size_t k = ii + 1; k < n; ++k) s -= std::conj(l(k, ii)) * x(k, c);
            x(ii, c) = s / l(ii, ii).real();
        }
    }
    return x;
}

}  // namespace dualzf
