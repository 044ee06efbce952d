#pragma once

/*
 * Ensemble data model: discrete classical distributions, density operators,
 * Gaussian phase-space ensembles, and signal ensembles (a list of states of
 * one kind with prior probabilities).
 *
 * Subsystem structure is explicit: classical distributions carry a list of
 * axis sizes, density operators a list of factor dimensions, Gaussians a
 * count of degrees of freedom.  Phase-space coordinates are ordered
 * (x1, p1, x2, p2, ...), one consecutive 2x2 block per degree of freedom.
 * All values are immutable after construction; operations return new values.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <variant>
#include <vector>

#include "ensvol/complex_matrix.hpp"
#include "ensvol/eigen.hpp"
#include "ensvol/errors.hpp"
#include "ensvol/real_matrix.hpp"
#include "ensvol/rng.hpp"
#include "ensvol/tensor.hpp"

namespace ensvol {

namespace detail {

// Probability entries in [-1e-14, 0) are roundoff: clip to zero and
// renormalize.  Anything more negative is invalid input, not roundoff.
inline void clip_and_check_probabilities(std::vector<double>& p, const char* what) {
    bool clipped = false;
    for (double& x : p) {
        if (x < 0.0) {
            if (x < -1e-14)
                throw ValidationError(std::string(what) + ": negative probability below -1e-14");
            x = 0.0;
            clipped = true;
        }
    }
    const double sum = std::accumulate(p.begin(), p.end(), 0.0);
    if (std::abs(sum - 1.0) > 1e-10)
        throw ValidationError(std::string(what) + ": probabilities do not sum to 1 within 1e-10");
    if (clipped)
        for (double& x : p) x /= sum;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Kinds

struct ClassicalDistribution {
    std::vector<std::size_t> axes;      // axis sizes, one per registered factor
    std::vector<double> probabilities;  // row-major tensor over the axes
    std::vector<std::string> labels;    // optional space label per axis (for K lookup)

    ClassicalDistribution() = default;
    ClassicalDistribution(std::vector<std::size_t> ax, std::vector<double> p,
                          std::vector<std::string> lb = {})
        : axes(std::move(ax)), probabilities(std::move(p)), labels(std::move(lb)) {
        if (axes.empty())
            throw ValidationError("ClassicalDistribution: empty axis list");
        const std::size_t total =
            std::accumulate(axes.begin(), axes.end(), std::size_t{1}, std::multiplies<>());
        if (total == 0 || total != probabilities.size())
            throw ValidationError("ClassicalDistribution: probability tensor size does not match axes");
        if (!labels.empty() && labels.size() != axes.size())
            throw ValidationError("ClassicalDistribution: label list must match axis count");
        detail::clip_and_check_probabilities(probabilities, "ClassicalDistribution");
    }

    std::size_t outcome_count() const { return probabilities.size(); }
    std::size_t factor_count() const { return axes.size(); }
};

struct DensityOperator {
    std::vector<std::size_t> factor_dims; // subsystem dimensions
    ComplexMatrix matrix;                 // total dimension = product of factor_dims
    std::vector<std::string> labels;      // optional space label per factor

    DensityOperator() = default;
    DensityOperator(std::vector<std::size_t> dims, ComplexMatrix m,
                    std::vector<std::string> lb = {})
        : factor_dims(std::move(dims)), matrix(std::move(m)), labels(std::move(lb)) {
        if (factor_dims.empty())
            throw ValidationError("DensityOperator: empty factor dimension list");
        const std::size_t total =
            std::accumulate(factor_dims.begin(), factor_dims.end(), std::size_t{1}, std::multiplies<>());
        if (!matrix.square() || matrix.rows != total)
            throw ValidationError("DensityOperator: matrix dimension does not match factor dimensions");
        if (!labels.empty() && labels.size() != factor_dims.size())
            throw ValidationError("DensityOperator: label list must match factor count");
        if (hermiticity_defect(matrix) > 1e-12 * max_abs(matrix))
            throw ValidationError("DensityOperator: matrix is not Hermitian within 1e-12 relative tolerance");
        if (std::abs(trace(matrix) - Complex{1.0}) > 1e-10)
            throw ValidationError("DensityOperator: trace differs from 1 by more than 1e-10");
        const auto spec = hermitian_eigen(matrix);
        if (spec.eigenvalues.front() < -1e-10)
            throw ValidationError("DensityOperator: smallest eigenvalue below -1e-10");
    }

    std::size_t dim() const { return matrix.rows; }
    std::size_t factor_count() const { return factor_dims.size(); }
};

struct GaussianEnsemble {
    std::size_t dof = 0;             // degrees of freedom n; phase space is 2n-dimensional
    std::vector<double> mean;        // 2n entries, (x1, p1, x2, p2, ...)
    RealMatrix covariance;           // 2n x 2n, symmetric positive definite
    std::vector<std::string> labels; // optional space label per degree of freedom

    GaussianEnsemble() = default;
    GaussianEnsemble(std::size_t n, std::vector<double> mu, RealMatrix cov,
                     std::vector<std::string> lb = {})
        : dof(n), mean(std::move(mu)), covariance(std::move(cov)), labels(std::move(lb)) {
        if (dof == 0)
            throw ValidationError("GaussianEnsemble: at least one degree of freedom required");
        if (mean.size() != 2 * dof)
            throw ValidationError("GaussianEnsemble: mean vector must have 2n entries");
        if (!covariance.square() || covariance.rows != 2 * dof)
            throw ValidationError("GaussianEnsemble: covariance must be 2n x 2n");
        if (!labels.empty() && labels.size() != dof)
            throw ValidationError("GaussianEnsemble: label list must match degree-of-freedom count");
        if (symmetry_defect(covariance) > 1e-12 * max_abs(covariance))
            throw ValidationError("GaussianEnsemble: covariance is not symmetric within 1e-12 relative tolerance");
        const auto eig = symmetric_eigenvalues(covariance);
        if (eig.front() <= 0.0)
            throw ValidationError("GaussianEnsemble: covariance is not positive definite");
    }

    std::size_t factor_count() const { return dof; }
};

using Ensemble = std::variant<ClassicalDistribution, DensityOperator, GaussianEnsemble>;

enum class Kind { classical, quantum, gaussian };

inline Kind kind_of(const Ensemble& e) { return static_cast<Kind>(e.index()); }

inline const char* kind_name(Kind k) {
    switch (k) {
        case Kind::classical: return "classical";
        case Kind::quantum: return "quantum";
        case Kind::gaussian: return "gaussian";
    }
    return "?";
}

inline std::size_t factor_count(const Ensemble& e) {
    return std::visit([](const auto& x) { return x.factor_count(); }, e);
}

inline std::vector<std::string> ensemble_labels(const Ensemble& e) {
    return std::visit([](const auto& x) { return x.labels; }, e);
}

namespace detail {

inline bool same_shape(const Ensemble& a, const Ensemble& b) {
    if (a.index() != b.index()) return false;
    if (const auto* ca = std::get_if<ClassicalDistribution>(&a))
        return ca->axes == std::get<ClassicalDistribution>(b).axes;
    if (const auto* qa = std::get_if<DensityOperator>(&a))
        return qa->factor_dims == std::get<DensityOperator>(b).factor_dims;
    return std::get<GaussianEnsemble>(a).dof == std::get<GaussianEnsemble>(b).dof;
}

inline std::vector<std::string> concat_labels(const std::vector<std::string>& a, std::size_t na,
                                              const std::vector<std::string>& b, std::size_t nb) {
    if (a.empty() && b.empty()) return {};
    std::vector<std::string> out(a.empty() ? std::vector<std::string>(na) : a);
    const std::vector<std::string> tail(b.empty() ? std::vector<std::string>(nb) : b);
    out.insert(out.end(), tail.begin(), tail.end());
    return out;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Signal ensembles (the channel alphabet)

struct SignalEnsemble {
    std::vector<Ensemble> states;
    std::vector<double> priors;

    SignalEnsemble() = default;
    SignalEnsemble(std::vector<Ensemble> st, std::vector<double> p)
        : states(std::move(st)), priors(std::move(p)) {
        if (states.empty())
            throw ValidationError("SignalEnsemble: state list is empty");
        if (priors.size() != states.size())
            throw ValidationError("SignalEnsemble: prior count does not match state count");
        for (std::size_t i = 1; i < states.size(); ++i)
            if (!detail::same_shape(states[0], states[i]))
                throw ValidationError("SignalEnsemble: states must share one kind and identical dimensions");
        detail::clip_and_check_probabilities(priors, "SignalEnsemble priors");
    }

    Kind kind() const { return kind_of(states.front()); }
    std::size_t size() const { return states.size(); }
};

// ---------------------------------------------------------------------------
// Composition, reduction, mixing

inline ClassicalDistribution product(const ClassicalDistribution& a, const ClassicalDistribution& b) {
    std::vector<std::size_t> axes = a.axes;
    axes.insert(axes.end(), b.axes.begin(), b.axes.end());
    std::vector<double> p;
    p.reserve(a.probabilities.size() * b.probabilities.size());
    for (double pa : a.probabilities)
        for (double pb : b.probabilities) p.push_back(pa * pb);
    return ClassicalDistribution(std::move(axes), std::move(p),
                                 detail::concat_labels(a.labels, a.axes.size(), b.labels, b.axes.size()));
}

inline DensityOperator product(const DensityOperator& a, const DensityOperator& b) {
    std::vector<std::size_t> dims = a.factor_dims;
    dims.insert(dims.end(), b.factor_dims.begin(), b.factor_dims.end());
    return DensityOperator(std::move(dims), kron(a.matrix, b.matrix),
                           detail::concat_labels(a.labels, a.factor_dims.size(), b.labels, b.factor_dims.size()));
}

inline GaussianEnsemble product(const GaussianEnsemble& a, const GaussianEnsemble& b) {
    std::vector<double> mean = a.mean;
    mean.insert(mean.end(), b.mean.begin(), b.mean.end());
    RealMatrix cov(2 * (a.dof + b.dof), 2 * (a.dof + b.dof));
    for (std::size_t i = 0; i < 2 * a.dof; ++i)
        for (std::size_t j = 0; j < 2 * a.dof; ++j) cov(i, j) = a.covariance(i, j);
    for (std::size_t i = 0; i < 2 * b.dof; ++i)
        for (std::size_t j = 0; j < 2 * b.dof; ++j) cov(2 * a.dof + i, 2 * a.dof + j) = b.covariance(i, j);
    return GaussianEnsemble(a.dof + b.dof, std::move(mean), std::move(cov),
                            detail::concat_labels(a.labels, a.dof, b.labels, b.dof));
}

inline Ensemble product(const Ensemble& a, const Ensemble& b) {
    if (a.index() != b.index())
        throw ValidationError(std::string("product: ensemble kinds do not match (") +
                              kind_name(kind_of(a)) + " vs " + kind_name(kind_of(b)) + ")");
    if (const auto* ca = std::get_if<ClassicalDistribution>(&a))
        return product(*ca, std::get<ClassicalDistribution>(b));
    if (const auto* qa = std::get_if<DensityOperator>(&a))
        return product(*qa, std::get<DensityOperator>(b));
    return product(std::get<GaussianEnsemble>(a), std::get<GaussianEnsemble>(b));
}

namespace detail {

inline std::vector<std::string> kept_label(const std::vector<std::string>& labels, std::size_t keep) {
    if (labels.empty()) return {};
    return {labels[keep]};
}

} // namespace detail

// Marginal over all axes but `keep`.
inline ClassicalDistribution reduce(const ClassicalDistribution& c, std::size_t keep) {
    if (c.axes.size() < 2)
        throw ValidationError("reduce: ensemble has fewer than two registered factors");
    if (keep >= c.axes.size())
        throw ValidationError("reduce: kept factor index out of range");
    std::vector<std::size_t> stride(c.axes.size(), 1);
    for (std::size_t a = c.axes.size(); a-- > 1;) stride[a - 1] = stride[a] * c.axes[a];
    std::vector<double> marginal(c.axes[keep], 0.0);
    for (std::size_t flat = 0; flat < c.probabilities.size(); ++flat)
        marginal[(flat / stride[keep]) % c.axes[keep]] += c.probabilities[flat];
    return ClassicalDistribution({c.axes[keep]}, std::move(marginal), detail::kept_label(c.labels, keep));
}

// Partial trace down to factor `keep`.
inline DensityOperator reduce(const DensityOperator& rho, std::size_t keep) {
    if (rho.factor_dims.size() < 2)
        throw ValidationError("reduce: ensemble has fewer than two registered factors");
    if (keep >= rho.factor_dims.size())
        throw ValidationError("reduce: kept factor index out of range");
    return DensityOperator({rho.factor_dims[keep]}, partial_trace(rho.matrix, rho.factor_dims, keep),
                           detail::kept_label(rho.labels, keep));
}

// Principal 2x2 submatrix of the kept degree of freedom.
inline GaussianEnsemble reduce(const GaussianEnsemble& g, std::size_t keep) {
    if (g.dof < 2)
        throw ValidationError("reduce: ensemble has fewer than two registered factors");
    if (keep >= g.dof)
        throw ValidationError("reduce: kept factor index out of range");
    std::vector<double> mean{g.mean[2 * keep], g.mean[2 * keep + 1]};
    RealMatrix cov(2, 2);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) cov(i, j) = g.covariance(2 * keep + i, 2 * keep + j);
    return GaussianEnsemble(1, std::move(mean), std::move(cov), detail::kept_label(g.labels, keep));
}

inline Ensemble reduce(const Ensemble& e, std::size_t keep) {
    return std::visit([&](const auto& x) -> Ensemble { return reduce(x, keep); }, e);
}

// Probability-weighted sum of the signal states.  Gaussian mixtures are
// rejected: a mixture of Gaussians is not Gaussian.
inline Ensemble mix(const SignalEnsemble& s) {
    if (s.kind() == Kind::gaussian)
        throw UnsupportedError("mix: Gaussian mixtures are not Gaussian and are not supported");
    if (s.kind() == Kind::classical) {
        const auto& first = std::get<ClassicalDistribution>(s.states.front());
        std::vector<double> p(first.probabilities.size(), 0.0);
        for (std::size_t i = 0; i < s.states.size(); ++i) {
            const auto& ci = std::get<ClassicalDistribution>(s.states[i]);
            for (std::size_t k = 0; k < p.size(); ++k) p[k] += s.priors[i] * ci.probabilities[k];
        }
        return ClassicalDistribution(first.axes, std::move(p), first.labels);
    }
    const auto& first = std::get<DensityOperator>(s.states.front());
    ComplexMatrix m(first.dim(), first.dim());
    for (std::size_t i = 0; i < s.states.size(); ++i) {
        const auto& qi = std::get<DensityOperator>(s.states[i]);
        for (std::size_t k = 0; k < m.entries.size(); ++k)
            m.entries[k] += s.priors[i] * qi.matrix.entries[k];
    }
    return DensityOperator(first.factor_dims, std::move(m), first.labels);
}

// ---------------------------------------------------------------------------
// Overlap and transformations

// Tr[rho' rho''] / sum_i p'_i p''_i; zero exactly for disjoint support.
inline double overlap(const Ensemble& a, const Ensemble& b) {
    if (!detail::same_shape(a, b))
        throw ValidationError("overlap: ensembles must share one kind and identical dimensions");
    if (const auto* ca = std::get_if<ClassicalDistribution>(&a)) {
        const auto& cb = std::get<ClassicalDistribution>(b);
        double s = 0.0;
        for (std::size_t i = 0; i < ca->probabilities.size(); ++i)
            s += ca->probabilities[i] * cb.probabilities[i];
        return s;
    }
    if (const auto* qa = std::get_if<DensityOperator>(&a)) {
        const auto& qb = std::get<DensityOperator>(b);
        Complex t = 0.0; // Tr[ab] without forming the full product
        for (std::size_t i = 0; i < qa->dim(); ++i)
            for (std::size_t k = 0; k < qa->dim(); ++k)
                t += qa->matrix(i, k) * qb.matrix(k, i);
        return t.real();
    }
    throw UnsupportedError("overlap: not defined for Gaussian ensembles");
}

inline DensityOperator apply_unitary(const DensityOperator& rho, const ComplexMatrix& u) {
    if (!u.square() || u.rows != rho.dim())
        throw ValidationError("apply_unitary: transform dimension does not match the state");
    if (unitarity_defect(u) > 1e-10)
        throw ValidationError("apply_unitary: matrix is not unitary within 1e-10");
    return DensityOperator(rho.factor_dims, u * rho.matrix * adjoint(u), rho.labels);
}

// Measure-preserving relabeling of flattened outcomes; perm must be a
// bijection.  new[perm[i]] = old[i].
inline ClassicalDistribution apply_permutation(const ClassicalDistribution& c,
                                               const std::vector<std::size_t>& perm) {
    if (perm.size() != c.probabilities.size())
        throw ValidationError("apply_permutation: permutation length does not match outcome count");
    std::vector<bool> seen(perm.size(), false);
    for (std::size_t t : perm) {
        if (t >= perm.size() || seen[t])
            throw ValidationError("apply_permutation: not a bijection on outcomes");
        seen[t] = true;
    }
    std::vector<double> p(c.probabilities.size());
    for (std::size_t i = 0; i < perm.size(); ++i) p[perm[i]] = c.probabilities[i];
    return ClassicalDistribution(c.axes, std::move(p), c.labels);
}

// ---------------------------------------------------------------------------
// Random generators (fuzzing inputs; deterministic given the Rng state)

// Ginibre construction: G G^dag / Tr, with G a dim x rank complex Gaussian
// matrix.  Full support when rank == dim.
inline DensityOperator random_density(std::size_t dim, std::size_t rank, Rng& rng) {
    if (dim == 0 || rank == 0 || rank > dim)
        throw ValidationError("random_density: rank must satisfy 1 <= rank <= dim");
    ComplexMatrix g(dim, rank);
    for (auto& e : g.entries) {
        const auto [re, im] = rng.gauss_pair();
        e = Complex(re, im);
    }
    ComplexMatrix rho = g * adjoint(g);
    const double tr = trace(rho).real();
    rho = Complex(1.0 / tr) * rho;
    return DensityOperator({dim}, std::move(rho));
}

// Haar-style unitary: modified Gram-Schmidt on a complex Gaussian matrix.
// Normalizing against real positive column norms fixes the phase gauge
// (the R factor has a positive diagonal).
inline ComplexMatrix random_unitary(std::size_t dim, Rng& rng) {
    if (dim == 0)
        throw ValidationError("random_unitary: dimension must be positive");
    ComplexMatrix g(dim, dim);
    for (auto& e : g.entries) {
        const auto [re, im] = rng.gauss_pair();
        e = Complex(re, im);
    }
    ComplexMatrix q(dim, dim);
    for (std::size_t j = 0; j < dim; ++j) {
        std::vector<Complex> v(dim);
        for (std::size_t i = 0; i < dim; ++i) v[i] = g(i, j);
        for (int pass = 0; pass < 2; ++pass) { // re-orthogonalize once
            for (std::size_t k = 0; k < j; ++k) {
                Complex proj = 0.0;
                for (std::size_t i = 0; i < dim; ++i) proj += std::conj(q(i, k)) * v[i];
                for (std::size_t i = 0; i < dim; ++i) v[i] -= proj * q(i, k);
            }
        }
        double norm = 0.0;
        for (const auto& x : v) norm += std::norm(x);
        norm = std::sqrt(norm);
        if (norm == 0.0)
            throw NumericalError("random_unitary: Gram-Schmidt hit a zero column");
        for (std::size_t i = 0; i < dim; ++i) q(i, j) = v[i] / norm;
    }
    return q;
}

// Uniform on the probability simplex (normalized exponentials).
inline std::vector<double> random_simplex(std::size_t n, Rng& rng) {
    std::vector<double> p(n);
    double sum = 0.0;
    for (double& x : p) {
        x = -std::log(rng.uniform_open());
        sum += x;
    }
    for (double& x : p) x /= sum;
    return p;
}

inline ClassicalDistribution random_distribution(const std::vector<std::size_t>& axes, Rng& rng) {
    const std::size_t total =
        std::accumulate(axes.begin(), axes.end(), std::size_t{1}, std::multiplies<>());
    return ClassicalDistribution(axes, random_simplex(total, rng));
}

// Wishart-style covariance B B^T plus a ridge keeping the spectrum safely
// positive; mean entries standard normal.
inline GaussianEnsemble random_gaussian(std::size_t dof, Rng& rng) {
    if (dof == 0)
        throw ValidationError("random_gaussian: at least one degree of freedom required");
    RealMatrix b(2 * dof, 2 * dof);
    for (auto& e : b.entries) e = rng.gauss();
    RealMatrix cov = symmetrized(b * transpose(b)) + 0.1 * RealMatrix::identity(2 * dof);
    std::vector<double> mean(2 * dof);
    for (auto& m : mean) m = rng.gauss();
    return GaussianEnsemble(dof, std::move(mean), std::move(cov));
}

// Random permutation (Fisher-Yates).
inline std::vector<std::size_t> random_permutation(std::size_t n, Rng& rng) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = n; i-- > 1;)
        std::swap(perm[i], perm[rng.uniform_int(0, i)]);
    return perm;
}

} // namespace ensvol
