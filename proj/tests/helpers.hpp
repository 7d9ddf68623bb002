#pragma once

#include <cmath>

#include "dualzf/channel.hpp"
#include "dualzf/linalg.hpp"

namespace dualzf::testing {

// Triple loop kept deliberately separate from the library's matmul.
inline ComplexMatrix naive_matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            cplx acc = 0.0;
            for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
            out(i, j) = acc;
        }
    return out;
}

// QR of a Gaussian matrix by classical Gram-Schmidt.
inline ComplexMatrix random_unitary(std::size_t n, SeededRng& rng) {
    ComplexMatrix g = sample_cn_matrix(n, n, rng);
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t p = 0; p < c; ++p) {
            cplx d = 0.0;
            for (std::size_t i = 0; i < n; ++i) d += std::conj(g(i, p)) * g(i, c);
            for (std::size_t i = 0; i < n; ++i) g(i, c) -= d * g(i, p);
        }
        double e = 0.0;
        for (std::size_t i = 0; i < n; ++i) e += std::norm(g(i, c));
        for (std::size_t i = 0; i < n; ++i) g(i, c) /= std::sqrt(e);
    }
    return g;
}

inline ComplexMatrix column(std::initializer_list<cplx> v) {
    ComplexMatrix m(v.size(), 1);
    std::size_t i = 0;
    for (const cplx& x : v) m(i++, 0) = x;
    return m;
}

}  // namespace dualzf::testing
