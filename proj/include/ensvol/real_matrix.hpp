#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "ensvol/complex_matrix.hpp"
#include "ensvol/errors.hpp"

namespace ensvol {

// Dense real matrix, row-major.  Used for phase-space objects: covariance
// matrices, OU drift/diffusion, symplectic maps.
struct RealMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> entries;

    RealMatrix() = default;
    RealMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), entries(r * c, 0.0) {}
    RealMatrix(std::size_t r, std::size_t c, std::vector<double> e)
        : rows(r), cols(c), entries(std::move(e)) {
        if (rows * cols != entries.size())
            throw ValidationError("RealMatrix: rows*cols does not match number of entries");
    }

    double& operator()(std::size_t i, std::size_t j) { return entries[i * cols + j]; }
    const double& operator()(std::size_t i, std::size_t j) const { return entries[i * cols + j]; }

    bool square() const { return rows == cols; }

    static RealMatrix identity(std::size_t n) {
        RealMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static RealMatrix diagonal(const std::vector<double>& d) {
        RealMatrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }
};

inline RealMatrix transpose(const RealMatrix& m) {
    RealMatrix r(m.cols, m.rows);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) r(j, i) = m(i, j);
    return r;
}

inline RealMatrix operator*(const RealMatrix& a, const RealMatrix& b) {
    if (a.cols != b.rows)
        throw ValidationError("matrix product: inner dimensions do not match");
    RealMatrix r(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t k = 0; k < a.cols; ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols; ++j) r(i, j) += aik * b(k, j);
        }
    return r;
}

inline RealMatrix operator+(const RealMatrix& a, const RealMatrix& b) {
    if (a.rows != b.rows || a.cols != b.cols)
        throw ValidationError("matrix sum: dimensions do not match");
    RealMatrix r = a;
    for (std::size_t i = 0; i < r.entries.size(); ++i) r.entries[i] += b.entries[i];
    return r;
}

inline RealMatrix operator-(const RealMatrix& a, const RealMatrix& b) {
    if (a.rows != b.rows || a.cols != b.cols)
        throw ValidationError("matrix difference: dimensions do not match");
    RealMatrix r = a;
    for (std::size_t i = 0; i < r.entries.size(); ++i) r.entries[i] -= b.entries[i];
    return r;
}

inline RealMatrix operator*(double s, const RealMatrix& m) {
    RealMatrix r = m;
    for (auto& e : r.entries) e *= s;
    return r;
}

inline std::vector<double> operator*(const RealMatrix& m, const std::vector<double>& v) {
    if (m.cols != v.size())
        throw ValidationError("matrix-vector product: dimensions do not match");
    std::vector<double> r(m.rows, 0.0);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) r[i] += m(i, j) * v[j];
    return r;
}

inline double max_abs(const RealMatrix& m) {
    double v = 0.0;
    for (double e : m.entries) v = std::max(v, std::abs(e));
    return v;
}

inline double symmetry_defect(const RealMatrix& m) {
    if (!m.square()) throw ValidationError("symmetry_defect: matrix is not square");
    double v = 0.0;
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = i + 1; j < m.cols; ++j)
            v = std::max(v, std::abs(m(i, j) - m(j, i)));
    return v;
}

inline RealMatrix symmetrized(const RealMatrix& m) {
    RealMatrix r(m.rows, m.cols);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) r(i, j) = 0.5 * (m(i, j) + m(j, i));
    return r;
}

inline ComplexMatrix complexified(const RealMatrix& m) {
    ComplexMatrix r(m.rows, m.cols);
    for (std::size_t i = 0; i < m.entries.size(); ++i) r.entries[i] = m.entries[i];
    return r;
}

} // namespace ensvol
