#pragma once

// Small dense matrices. Every matrix in this library is at most 2N x 4N with
// N <= 8, so storage is a flat row-major vector and nothing is blocked.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "dualzf/errors.hpp"

namespace dualzf {

using cplx = std::complex<double>;

namespace detail {
inline double abs_sq(double v) { return v * v; }
inline double abs_sq(const cplx& v) { return std::norm(v); }
inline double conj_of(double v) { return v; }
inline cplx conj_of(const cplx& v) { return std::conj(v); }
}  // namespace detail

template <typename T>
class Matrix {
public:
    using value_type = T;

    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    Matrix(std::initializer_list<std::initializer_list<T>> init) {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (const auto& row : init) {
            if (row.size() != cols_) throw DimensionMismatch("ragged matrix initializer");
            data_.insert(data_.end(), row.begin(), row.end());
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }

    T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<T> data() noexcept { return data_; }
    std::span<const T> data() const noexcept { return data_; }
    std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
        if (r0 + nr > rows_ || c0 + nc > cols_) throw DimensionMismatch("block out of range");
        Matrix out(nr, nc);
        for (std::size_t r = 0; r < nr; ++r)
            for (std::size_t c = 0; c < nc; ++c) out(r, c) = (*this)(r0 + r, c0 + c);
        return out;
    }

    void set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
        if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_) throw DimensionMismatch("set_block out of range");
        for (std::size_t r = 0; r < b.rows_; ++r)
            for (std::size_t c = 0; c < b.cols_; ++c) (*this)(r0 + r, c0 + c) = b(r, c);
    }

    Matrix& operator+=(const Matrix& o) {
        require_same_shape(o, "+=");
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
        return *this;
    }
    Matrix& operator-=(const Matrix& o) {
        require_same_shape(o, "-=");
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
        return *this;
    }
    Matrix& operator*=(T s) {
        for (auto& v : data_) v *= s;
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, T s) { return a *= s; }
    friend Matrix operator*(T s, Matrix a) { return a *= s; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    void require_same_shape(const Matrix& o, const char* op) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw DimensionMismatch(std::string("shape mismatch in ") + op);
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using ComplexMatrix = Matrix<cplx>;
using RealMatrix = Matrix<double>;

template <typename T>
Matrix<T> matmul(const Matrix<T>& a, const Matrix<T>& b) {
    if (a.cols() != b.rows())
        throw DimensionMismatch("matmul: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                " times " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
    Matrix<T> out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const T aik = a(i, k);
            if (aik == T(0)) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    return out;
}

template <typename T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b) {
    return matmul(a, b);
}

template <typename T>
Matrix<T> transpose(const Matrix<T>& m) {
    Matrix<T> out(m.cols(), m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) out(c, r) = m(r, c);
    return out;
}

template <typename T>
Matrix<T> hermitian(const Matrix<T>& m) {
    Matrix<T> out(m.cols(), m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) out(c, r) = detail::conj_of(m(r, c));
    return out;
}

template <typename T>
Matrix<T> conjugate(const Matrix<T>& m) {
    Matrix<T> out = m;
    for (auto& v : out.data()) v = detail::conj_of(v);
    return out;
}

template <typename T>
double fro_norm_sq(const Matrix<T>& m) {
    double acc = 0.0;
    for (const auto& v : m.data()) acc += detail::abs_sq(v);
    return acc;
}

template <typename T>
double fro_norm(const Matrix<T>& m) {
    return std::sqrt(fro_norm_sq(m));
}

template <typename T>
double max_abs(const Matrix<T>& m) {
    double acc = 0.0;
    for (const auto& v : m.data()) acc = std::max(acc, std::abs(v));
    return acc;
}

template <typename T>
bool all_finite(const Matrix<T>& m) {
    for (const auto& v : m.data()) {
        if constexpr (std::is_same_v<T, cplx>) {
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
        } else {
            if (!std::isfinite(v)) return false;
        }
    }
    return true;
}

template <typename T>
double trace_real(const Matrix<T>& m) {
    if (m.rows() != m.cols()) throw DimensionMismatch("trace of non-square matrix");
    double acc = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) acc += std::real(m(i, i));
    return acc;
}

RealMatrix kron_identity(std::size_t n, const RealMatrix& m);

// [[s1, s2], [-s2*, s1*]]
ComplexMatrix alamouti_embed(cplx s1, cplx s2);

bool is_alamouti(const ComplexMatrix& m, double tol);

// True when every aligned 2x2 sub-block of m is Alamouti-structured.
bool is_block_alamouti(const ComplexMatrix& m, double tol);

// Solves A X = B for Hermitian positive definite A by Cholesky. Throws
// SingularMatrix when the smallest pivot falls below 1e-12 of the largest.
ComplexMatrix solve_hpd(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace dualzf
