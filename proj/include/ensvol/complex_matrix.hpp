#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "ensvol/errors.hpp"

namespace ensvol {

using Complex = std::complex<double>;

// Dense complex matrix, row-major.  Dimensions stay small (desk scale,
// <= ~100), so everything is plain O(n^2)/O(n^3) loops over a flat vector.
struct ComplexMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Complex> entries; // rows*cols, row-major

    ComplexMatrix() = default;
    ComplexMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), entries(r * c) {}
    ComplexMatrix(std::size_t r, std::size_t c, std::vector<Complex> e)
        : rows(r), cols(c), entries(std::move(e)) {
        if (rows * cols != entries.size())
            throw ValidationError("ComplexMatrix: rows*cols does not match number of entries");
    }

    Complex& operator()(std::size_t i, std::size_t j) { return entries[i * cols + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return entries[i * cols + j]; }

    bool square() const { return rows == cols; }

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static ComplexMatrix diagonal(const std::vector<double>& d) {
        ComplexMatrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }
};

inline ComplexMatrix adjoint(const ComplexMatrix& m) {
    ComplexMatrix r(m.cols, m.rows);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j)
            r(j, i) = std::conj(m(i, j));
    return r;
}

inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols != b.rows)
        throw ValidationError("matrix product: inner dimensions do not match");
    ComplexMatrix r(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t k = 0; k < a.cols; ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex{}) continue;
            for (std::size_t j = 0; j < b.cols; ++j)
                r(i, j) += aik * b(k, j);
        }
    return r;
}

inline ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows != b.rows || a.cols != b.cols)
        throw ValidationError("matrix sum: dimensions do not match");
    ComplexMatrix r = a;
    for (std::size_t i = 0; i < r.entries.size(); ++i) r.entries[i] += b.entries[i];
    return r;
}

inline ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows != b.rows || a.cols != b.cols)
        throw ValidationError("matrix difference: dimensions do not match");
    ComplexMatrix r = a;
    for (std::size_t i = 0; i < r.entries.size(); ++i) r.entries[i] -= b.entries[i];
    return r;
}

inline ComplexMatrix operator*(Complex s, const ComplexMatrix& m) {
    ComplexMatrix r = m;
    for (auto& e : r.entries) e *= s;
    return r;
}

inline Complex trace(const ComplexMatrix& m) {
    if (!m.square()) throw ValidationError("trace: matrix is not square");
    Complex t = 0.0;
    for (std::size_t i = 0; i < m.rows; ++i) t += m(i, i);
    return t;
}

inline double max_abs(const ComplexMatrix& m) {
    double v = 0.0;
    for (const auto& e : m.entries) v = std::max(v, std::abs(e));
    return v;
}

inline double frobenius_norm(const ComplexMatrix& m) {
    double s = 0.0;
    for (const auto& e : m.entries) s += std::norm(e);
    return std::sqrt(s);
}

// max_ij |m[i][j] - conj(m[j][i])|; zero for an exactly Hermitian matrix.
inline double hermiticity_defect(const ComplexMatrix& m) {
    if (!m.square()) throw ValidationError("hermiticity_defect: matrix is not square");
    double v = 0.0;
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = i; j < m.cols; ++j)
            v = std::max(v, std::abs(m(i, j) - std::conj(m(j, i))));
    return v;
}

// Hermitian within relative tolerance: defect <= tol * max|m|.
inline bool is_hermitian(const ComplexMatrix& m, double tol = 1e-12) {
    return m.square() && hermiticity_defect(m) <= tol * max_abs(m);
}

// max_ij |u^dag u - 1|.
inline double unitarity_defect(const ComplexMatrix& u) {
    if (!u.square()) return 1.0;
    ComplexMatrix g = adjoint(u) * u;
    double v = 0.0;
    for (std::size_t i = 0; i < g.rows; ++i)
        for (std::size_t j = 0; j < g.cols; ++j)
            v = std::max(v, std::abs(g(i, j) - (i == j ? Complex{1.0} : Complex{})));
    return v;
}

inline ComplexMatrix symmetrized(const ComplexMatrix& m) {
    ComplexMatrix r(m.rows, m.cols);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j)
            r(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
    return r;
}

} // namespace ensvol
