#pragma once

/*
 * Entropies and the ensemble volume V = K exp(S).
 *
 * S is Shannon entropy for classical distributions, von Neumann entropy for
 * density operators, and differential entropy n ln(2 pi e) + (1/2) ln det C
 * for Gaussian ensembles (phase-space units, so the Gaussian volume carries
 * units of action^n).  K is a product of one constant per factor, resolved
 * by the factor's space label with a fallback default.
 *
 * Conventions: 0 ln 0 = 0; entropies are in nats unless a report says
 * otherwise; volume of a classical point mass is K (log-volume ln K).
 */

#include <cmath>
#include <cstddef>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "ensvol/eigen.hpp"
#include "ensvol/ensembles.hpp"
#include "ensvol/errors.hpp"

namespace ensvol {

inline constexpr double nats_to_bits = 1.4426950408889634; // 1/ln 2

// Entropy amount, stored in nats.  Converts implicitly to double (nats) so
// values participate in arithmetic; bits are a presentation-time view.
struct EntropyValue {
    double nats = 0.0;
    constexpr EntropyValue() = default;
    constexpr EntropyValue(double n) : nats(n) {}
    constexpr operator double() const { return nats; }
    constexpr double bits() const { return nats * nats_to_bits; }
};

// ---------------------------------------------------------------------------
// Entropies

// -sum p ln p over any nonnegative vector summing to ~1.
inline EntropyValue shannon_entropy(const std::vector<double>& p) {
    double s = 0.0;
    for (double x : p)
        if (x > 0.0) s -= x * std::log(x);
    return s;
}

inline EntropyValue shannon_entropy(const ClassicalDistribution& c) {
    return shannon_entropy(c.probabilities);
}

// Eigenvalues within roundoff of zero contribute nothing.
inline EntropyValue von_neumann_entropy(const DensityOperator& rho) {
    const auto spec = hermitian_eigen(rho.matrix);
    double s = 0.0;
    for (double lam : spec.eigenvalues)
        if (lam > 1e-15) s -= lam * std::log(lam);
    return s;
}

// log det by eigenvalues; the constructor guarantees positive definiteness.
inline EntropyValue gaussian_entropy(const GaussianEnsemble& g) {
    const auto eig = symmetric_eigenvalues(g.covariance);
    double logdet = 0.0;
    for (double lam : eig) {
        if (lam <= 0.0)
            throw NumericalError("gaussian_entropy: covariance eigenvalue is not positive");
        logdet += std::log(lam);
    }
    return static_cast<double>(g.dof) * std::log(2.0 * std::numbers::pi * std::numbers::e) + 0.5 * logdet;
}

inline EntropyValue entropy(const Ensemble& ens) {
    if (const auto* c = std::get_if<ClassicalDistribution>(&ens)) return shannon_entropy(*c);
    if (const auto* q = std::get_if<DensityOperator>(&ens)) return von_neumann_entropy(*q);
    return gaussian_entropy(std::get<GaussianEnsemble>(ens));
}

// Renyi order-alpha entropy (1-alpha)^-1 ln sum lambda^alpha; alpha = 1
// falls back to the Shannon / von Neumann limit.
inline EntropyValue renyi_entropy(const std::vector<double>& p, double alpha) {
    if (alpha <= 0.0)
        throw ValidationError("renyi_entropy: order must be positive");
    if (std::abs(alpha - 1.0) < 1e-12) return shannon_entropy(p);
    double s = 0.0;
    for (double x : p)
        if (x > 0.0) s += std::pow(x, alpha);
    return std::log(s) / (1.0 - alpha);
}

inline EntropyValue renyi_entropy(const Ensemble& ens, double alpha) {
    if (const auto* c = std::get_if<ClassicalDistribution>(&ens))
        return renyi_entropy(c->probabilities, alpha);
    if (const auto* q = std::get_if<DensityOperator>(&ens))
        return renyi_entropy(hermitian_eigen(q->matrix).eigenvalues, alpha);
    throw UnsupportedError("renyi_entropy: not defined for Gaussian ensembles");
}

// ---------------------------------------------------------------------------
// Volume

// Per-factor multiplicative constants.  Factors resolve K by their space
// label; unlabeled factors (and labels absent from the map) use the default.
// A missing default with an unlabeled factor is an error.
struct VolumeContext {
    std::map<std::string, double> k_constants;
    std::optional<double> default_k = 1.0;
    double hbar = 1.0;

    double h() const { return 2.0 * std::numbers::pi * hbar; }

    double factor_k(const std::string& label) const {
        if (!label.empty()) {
            const auto it = k_constants.find(label);
            if (it != k_constants.end()) return it->second;
        }
        if (default_k) return *default_k;
        throw ValidationError("VolumeContext: no constant registered for factor label '" + label + "'");
    }

    double log_k(const Ensemble& ens) const {
        const std::size_t n = factor_count(ens);
        const auto labels = ensemble_labels(ens);
        double lk = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double k = factor_k(labels.empty() ? std::string{} : labels[i]);
            if (k <= 0.0)
                throw ValidationError("VolumeContext: factor constants must be positive");
            lk += std::log(k);
        }
        return lk;
    }
};

inline double log_volume(const Ensemble& ens, const VolumeContext& ctx = {}) {
    return ctx.log_k(ens) + entropy(ens);
}

inline double volume(const Ensemble& ens, const VolumeContext& ctx = {}) {
    return std::exp(log_volume(ens, ctx));
}

// K exp(Renyi entropy); used by the projection-axiom counterexample search.
inline double renyi_volume(const Ensemble& ens, double alpha, const VolumeContext& ctx = {}) {
    return std::exp(ctx.log_k(ens) + renyi_entropy(ens, alpha));
}

// ---------------------------------------------------------------------------
// Thermodynamic reading: k ln(V/K) = k S, with V/K = e^{S} the effective
// number of non-overlapping zero-volume cells (microstates).  Vanishes for
// pure states regardless of K.

struct ThermodynamicReport {
    double entropy_nats = 0.0;     // S
    double log_k = 0.0;            // ln K over registered factors
    double log_volume = 0.0;       // ln V = ln K + S
    double microstate_count = 0.0; // V/K = e^{S}
    double k_boltzmann = 1.0;
    double thermodynamic = 0.0;    // k ln(V/K)
};

inline ThermodynamicReport thermodynamic_entropy(const Ensemble& ens, const VolumeContext& ctx = {},
                                                 double k_boltzmann = 1.0) {
    if (k_boltzmann <= 0.0)
        throw ValidationError("thermodynamic_entropy: Boltzmann constant must be positive");
    ThermodynamicReport r;
    r.entropy_nats = entropy(ens);
    r.log_k = ctx.log_k(ens);
    r.log_volume = r.log_k + r.entropy_nats;
    r.microstate_count = std::exp(r.entropy_nats);
    r.k_boltzmann = k_boltzmann;
    r.thermodynamic = k_boltzmann * r.entropy_nats;
    return r;
}

} // namespace ensvol
