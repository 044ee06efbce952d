#pragma once

/*
 * Hermitian eigensolver: cyclic Jacobi with complex (phase-carrying)
 * rotations.  Unconditionally convergent on Hermitian input and entirely
 * adequate at desk dimensions (<= ~100); no attempt at QR-style speed.
 *
 * Convergence: off-diagonal Frobenius norm <= 1e-13 * ||input||_F, at most
 * 100 sweeps.  Input is symmetrized (M + M^dag)/2 before iterating to
 * suppress roundoff drift; inputs that are not Hermitian to begin with are
 * rejected, not silently symmetrized.
 */

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "ensvol/complex_matrix.hpp"
#include "ensvol/errors.hpp"
#include "ensvol/real_matrix.hpp"

namespace ensvol {

// Eigenvalues ascending; eigenvectors as orthonormal columns, column j
// belonging to eigenvalue j.
struct Spectrum {
    std::vector<double> eigenvalues;
    ComplexMatrix eigenvectors;
};

namespace detail {

inline double offdiag_frobenius(const ComplexMatrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

} // namespace detail

inline Spectrum hermitian_eigen(const ComplexMatrix& m) {
    if (!m.square())
        throw ValidationError("hermitian_eigen: matrix is not square");
    if (hermiticity_defect(m) > 1e-12 * max_abs(m))
        throw ValidationError("hermitian_eigen: matrix is not Hermitian within 1e-12 relative tolerance");

    const std::size_t n = m.rows;
    ComplexMatrix a = symmetrized(m);
    ComplexMatrix v = ComplexMatrix::identity(n);

    const double target = 1e-13 * frobenius_norm(a);
    constexpr int max_sweeps = 100;

    bool converged = detail::offdiag_frobenius(a) <= target;
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex apq = a(p, q);
                const double absb = std::abs(apq);
                if (absb == 0.0) continue;

                // Rotation zeroing a[p][q]: tan(2*theta) = 2|apq| / (aqq - app),
                // with the phase of apq folded into the off-diagonal of the
                // rotation so the 2x2 problem reduces to the real case.
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * absb);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const Complex s = (t * c) * (apq / absb);
                const Complex sbar = std::conj(s);

                for (std::size_t k = 0; k < n; ++k) { // A <- A U
                    const Complex akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - sbar * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) { // A <- U^dag A
                    const Complex apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = sbar * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) { // V <- V U
                    const Complex vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - sbar * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
        converged = detail::offdiag_frobenius(a) <= target;
    }
    if (!converged)
        throw NumericalError("hermitian_eigen: did not converge within 100 Jacobi sweeps");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

    Spectrum spec;
    spec.eigenvalues.resize(n);
    spec.eigenvectors = ComplexMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        spec.eigenvalues[j] = a(order[j], order[j]).real();
        for (std::size_t i = 0; i < n; ++i) spec.eigenvectors(i, j) = v(i, order[j]);
    }
    return spec;
}

// Eigenvalues of a real symmetric matrix, ascending.
inline std::vector<double> symmetric_eigenvalues(const RealMatrix& m) {
    return hermitian_eigen(complexified(m)).eigenvalues;
}

} // namespace ensvol
