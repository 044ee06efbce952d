#pragma once

/*
 * Linear symplectic maps on 2n-dimensional phase space, coordinates ordered
 * (x1, p1, x2, p2, ...).  A map S is symplectic when S J S^T = J with J the
 * block-diagonal form [[0,1],[-1,0]] per degree of freedom; det S = 1, so
 * covariance determinants (and hence Gaussian entropies) are preserved.
 */

#include <cmath>
#include <cstddef>
#include <numbers>

#include "ensvol/ensembles.hpp"
#include "ensvol/errors.hpp"
#include "ensvol/real_matrix.hpp"
#include "ensvol/rng.hpp"

namespace ensvol {

inline RealMatrix symplectic_form(std::size_t dof) {
    if (dof == 0)
        throw ValidationError("symplectic_form: at least one degree of freedom required");
    RealMatrix j(2 * dof, 2 * dof);
    for (std::size_t k = 0; k < dof; ++k) {
        j(2 * k, 2 * k + 1) = 1.0;
        j(2 * k + 1, 2 * k) = -1.0;
    }
    return j;
}

inline double symplectic_defect(const RealMatrix& s) {
    if (!s.square() || s.rows % 2 != 0 || s.rows == 0)
        throw ValidationError("symplectic_defect: matrix must be square with even dimension");
    const RealMatrix j = symplectic_form(s.rows / 2);
    return max_abs(s * j * transpose(s) - j);
}

inline bool is_symplectic(const RealMatrix& s, double tol = 1e-10) {
    return symplectic_defect(s) <= tol;
}

// mu -> S mu, C -> S C S^T.  The product is re-symmetrized to keep roundoff
// from tripping the covariance validation.
inline GaussianEnsemble apply_symplectic(const GaussianEnsemble& g, const RealMatrix& s) {
    if (!s.square() || s.rows != 2 * g.dof)
        throw ValidationError("apply_symplectic: transform dimension does not match the ensemble");
    if (!is_symplectic(s))
        throw ValidationError("apply_symplectic: matrix is not symplectic within 1e-10");
    return GaussianEnsemble(g.dof, s * g.mean, symmetrized(s * g.covariance * transpose(s)), g.labels);
}

namespace detail {

// In-place left-multiplication by a rotation acting on rows/cols a and b of
// the accumulated transform: out = R(a,b,theta) * out.
inline void rotate_rows(RealMatrix& m, std::size_t a, std::size_t b, double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    for (std::size_t j = 0; j < m.cols; ++j) {
        const double va = m(a, j), vb = m(b, j);
        m(a, j) = c * va + s * vb;
        m(b, j) = -s * va + c * vb;
    }
}

} // namespace detail

// Random symplectic map: per-dof phase rotations and squeezes composed with
// dof-pair mixers.  Each elementary factor satisfies S J S^T = J exactly
// (rotations because det = 1 in a conjugate (x,p) block, squeezes diag(s,1/s)
// because the cross terms cancel, mixers because they act identically on the
// x and p sectors), so the composition does too, up to roundoff.
inline RealMatrix random_symplectic(std::size_t dof, Rng& rng) {
    if (dof == 0)
        throw ValidationError("random_symplectic: at least one degree of freedom required");
    RealMatrix s = RealMatrix::identity(2 * dof);
    for (std::size_t k = 0; k < dof; ++k) {
        detail::rotate_rows(s, 2 * k, 2 * k + 1, 2.0 * std::numbers::pi * rng.uniform());
        const double stretch = std::exp(rng.uniform() - 0.5); // squeeze in [e^-1/2, e^1/2]
        for (std::size_t j = 0; j < s.cols; ++j) {
            s(2 * k, j) *= stretch;
            s(2 * k + 1, j) /= stretch;
        }
    }
    // Mix dof pairs: simultaneous rotation of the x and p sectors.
    for (std::size_t a = 0; a + 1 < dof; ++a)
        for (std::size_t b = a + 1; b < dof; ++b) {
            const double theta = 2.0 * std::numbers::pi * rng.uniform();
            detail::rotate_rows(s, 2 * a, 2 * b, theta);
            detail::rotate_rows(s, 2 * a + 1, 2 * b + 1, theta);
        }
    return s;
}

} // namespace ensvol
