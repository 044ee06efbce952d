#pragma once

/*
 * Executable checks of the four volume axioms plus the order-alpha
 * counterexample search showing that exponentiated Renyi entropies fail the
 * projection inequality away from alpha = 1.
 *
 * Violations are signed slacks, positive = violated, so near-equality cases
 * stay visible and tolerances stay auditable.  Every report carries a witness
 * (the concrete inputs of the worst trial); re-evaluating the witness through
 * evaluate_witness reproduces worst_violation within 1e-12 by construction,
 * because checks and re-evaluation share the violation functions below.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ensvol/ensembles.hpp"
#include "ensvol/errors.hpp"
#include "ensvol/symplectic.hpp"
#include "ensvol/volume.hpp"

namespace ensvol {

enum class AxiomId { invariance, cartesian, projection, uniformity, renyi_projection };

inline const char* axiom_label(AxiomId id) {
    switch (id) {
        case AxiomId::invariance: return "i";
        case AxiomId::cartesian: return "ii";
        case AxiomId::projection: return "iii";
        case AxiomId::uniformity: return "iv";
        case AxiomId::renyi_projection: return "renyi";
    }
    return "?";
}

inline AxiomId axiom_from_label(const std::string& label) {
    if (label == "i") return AxiomId::invariance;
    if (label == "ii") return AxiomId::cartesian;
    if (label == "iii") return AxiomId::projection;
    if (label == "iv") return AxiomId::uniformity;
    if (label == "renyi") return AxiomId::renyi_projection;
    throw ValidationError("unknown axiom label '" + label + "' (expected i|ii|iii|iv|renyi)");
}

// One transform kind per ensemble kind: unitary conjugation, outcome
// relabeling, linear symplectic map.
using Transform = std::variant<ComplexMatrix, std::vector<std::size_t>, RealMatrix>;

inline Ensemble apply_transform(const Ensemble& e, const Transform& t) {
    if (const auto* u = std::get_if<ComplexMatrix>(&t)) {
        if (const auto* q = std::get_if<DensityOperator>(&e)) return apply_unitary(*q, *u);
        throw ValidationError("apply_transform: unitary transforms act on quantum ensembles only");
    }
    if (const auto* perm = std::get_if<std::vector<std::size_t>>(&t)) {
        if (const auto* c = std::get_if<ClassicalDistribution>(&e)) return apply_permutation(*c, *perm);
        throw ValidationError("apply_transform: permutations act on classical ensembles only");
    }
    const auto& s = std::get<RealMatrix>(t);
    if (const auto* g = std::get_if<GaussianEnsemble>(&e)) return apply_symplectic(*g, s);
    throw ValidationError("apply_transform: symplectic maps act on Gaussian ensembles only");
}

struct AxiomWitness {
    std::vector<Ensemble> inputs;              // 1 (i, iii, renyi) or 2 (ii, iv) ensembles
    std::optional<ComplexMatrix> unitary;
    std::optional<std::vector<std::size_t>> permutation;
    std::optional<RealMatrix> symplectic;
    std::optional<double> lambda;              // uniformity: mixing weight of the grid maximum
    std::optional<double> alpha;               // renyi search order

    Transform transform() const {
        if (unitary) return *unitary;
        if (permutation) return *permutation;
        if (symplectic) return *symplectic;
        throw ValidationError("AxiomWitness: no transform stored");
    }

    void set_transform(const Transform& t) {
        if (const auto* u = std::get_if<ComplexMatrix>(&t)) unitary = *u;
        else if (const auto* p = std::get_if<std::vector<std::size_t>>(&t)) permutation = *p;
        else symplectic = std::get<RealMatrix>(t);
    }
};

struct AxiomReport {
    AxiomId axiom = AxiomId::invariance;
    std::size_t trials = 0;
    double worst_violation = 0.0; // positive = violated
    double tolerance = 0.0;
    bool pass = true;
    std::uint64_t seed = 0;       // 0 for direct single checks
    std::optional<AxiomWitness> witness;
};

// ---------------------------------------------------------------------------
// Violation functions (shared by checks, fuzzers, and witness re-evaluation)

namespace detail {

// Drift of V under the transform, relative to V.  Dimensionless, so worst
// cases merge sensibly across trials of different scale.
inline double invariance_violation(const Ensemble& e, const Transform& t, const VolumeContext& ctx) {
    const double v0 = volume(e, ctx);
    return std::abs(volume(apply_transform(e, t), ctx) - v0) / v0;
}

// |V(e1 x e2) - V(e1) V(e2)| relative to the product.
inline double cartesian_violation(const Ensemble& e1, const Ensemble& e2, const VolumeContext& ctx) {
    const double v12 = volume(product(e1, e2), ctx);
    const double v1v2 = volume(e1, ctx) * volume(e2, ctx);
    return std::abs(v12 - v1v2) / v1v2;
}

// Signed slack of the joint volume over the product of all single-factor
// reductions; positive means subadditivity failed.
inline double projection_violation(const Ensemble& joint, const VolumeContext& ctx) {
    if (factor_count(joint) < 2)
        throw ValidationError("projection check: ensemble has fewer than two registered factors");
    double product_of_marginals = 1.0;
    for (std::size_t k = 0; k < factor_count(joint); ++k)
        product_of_marginals *= volume(reduce(joint, k), ctx);
    return volume(joint, ctx) - product_of_marginals;
}

inline double mixture_volume(const Ensemble& e1, const Ensemble& e2, double lam,
                             const VolumeContext& ctx) {
    return volume(mix(SignalEnsemble({e1, e2}, {lam, 1.0 - lam})), ctx);
}

// Signed slack of the mixture volume at weight lam over the ceiling 2 V(e1).
inline double uniformity_violation(const Ensemble& e1, const Ensemble& e2, double lam,
                                   const VolumeContext& ctx) {
    return mixture_volume(e1, e2, lam, ctx) - 2.0 * volume(e1, ctx);
}

inline double renyi_projection_violation(const Ensemble& joint, double alpha, const VolumeContext& ctx) {
    if (factor_count(joint) < 2)
        throw ValidationError("order-alpha projection check: ensemble has fewer than two registered factors");
    double product_of_marginals = 1.0;
    for (std::size_t k = 0; k < factor_count(joint); ++k)
        product_of_marginals *= renyi_volume(reduce(joint, k), alpha, ctx);
    return renyi_volume(joint, alpha, ctx) - product_of_marginals;
}

} // namespace detail

// Recompute the violation recorded in a report from its witness.
inline double evaluate_witness(AxiomId axiom, const AxiomWitness& w, const VolumeContext& ctx = {}) {
    switch (axiom) {
        case AxiomId::invariance:
            return detail::invariance_violation(w.inputs.at(0), w.transform(), ctx);
        case AxiomId::cartesian:
            return detail::cartesian_violation(w.inputs.at(0), w.inputs.at(1), ctx);
        case AxiomId::projection:
            return detail::projection_violation(w.inputs.at(0), ctx);
        case AxiomId::uniformity:
            return detail::uniformity_violation(w.inputs.at(0), w.inputs.at(1), w.lambda.value(), ctx);
        case AxiomId::renyi_projection:
            return detail::renyi_projection_violation(w.inputs.at(0), w.alpha.value(), ctx);
    }
    throw ValidationError("evaluate_witness: unknown axiom");
}

// ---------------------------------------------------------------------------
// Single-instance checks

inline AxiomReport check_invariance(const Ensemble& e, const Transform& t,
                                    const VolumeContext& ctx = {}) {
    AxiomReport r;
    r.axiom = AxiomId::invariance;
    r.trials = 1;
    r.tolerance = 1e-9; // drift relative to V(e)
    r.worst_violation = detail::invariance_violation(e, t, ctx);
    r.pass = r.worst_violation <= r.tolerance;
    AxiomWitness w;
    w.inputs = {e};
    w.set_transform(t);
    r.witness = std::move(w);
    return r;
}

inline AxiomReport check_cartesian(const Ensemble& e1, const Ensemble& e2,
                                   const VolumeContext& ctx = {}) {
    AxiomReport r;
    r.axiom = AxiomId::cartesian;
    r.trials = 1;
    r.tolerance = 1e-9; // equality defect relative to V(e1) V(e2)
    r.worst_violation = detail::cartesian_violation(e1, e2, ctx);
    r.pass = r.worst_violation <= r.tolerance;
    AxiomWitness w;
    w.inputs = {e1, e2};
    r.witness = std::move(w);
    return r;
}

inline AxiomReport check_projection(const Ensemble& joint, const VolumeContext& ctx = {}) {
    AxiomReport r;
    r.axiom = AxiomId::projection;
    r.trials = 1;
    r.tolerance = 1e-9;
    r.worst_violation = detail::projection_violation(joint, ctx);
    r.pass = r.worst_violation <= r.tolerance;
    AxiomWitness w;
    w.inputs = {joint};
    r.witness = std::move(w);
    return r;
}

inline std::vector<double> uniform_lambda_grid(std::size_t points = 101) {
    if (points < 2)
        throw ValidationError("uniform_lambda_grid: at least two points required");
    std::vector<double> grid(points);
    for (std::size_t i = 0; i < points; ++i)
        grid[i] = static_cast<double>(i) / static_cast<double>(points - 1);
    return grid;
}

// Sweep V(lam e1 + (1-lam) e2) over the grid.  Preconditions: disjoint
// support and equal volumes, the regime where the ceiling 2 V(e1) and the
// lam = 1/2 maximum are exact statements.  Pass requires every grid value
// at or below the ceiling (within tolerance) and the grid argmax at 1/2
// within grid resolution.
inline AxiomReport check_uniformity(const Ensemble& e1, const Ensemble& e2,
                                    const std::vector<double>& lambdas,
                                    const VolumeContext& ctx = {}) {
    if (lambdas.empty())
        throw ValidationError("check_uniformity: empty mixing-weight grid");
    for (double lam : lambdas)
        if (lam < 0.0 || lam > 1.0)
            throw ValidationError("check_uniformity: mixing weights must lie in [0,1]");
    if (overlap(e1, e2) > 1e-10)
        throw ValidationError("check_uniformity: inputs must have disjoint support (overlap above 1e-10)");
    const double v1 = volume(e1, ctx);
    if (std::abs(volume(e2, ctx) - v1) > 1e-9 * v1)
        throw ValidationError("check_uniformity: inputs must have equal volumes within 1e-9 relative");

    AxiomReport r;
    r.axiom = AxiomId::uniformity;
    r.trials = 1;
    r.tolerance = 1e-9;
    double best_volume = -1.0, peak = 0.0, max_gap = 0.0;
    std::vector<double> sorted = lambdas;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 1; i < sorted.size(); ++i)
        max_gap = std::max(max_gap, sorted[i] - sorted[i - 1]);
    double worst = -std::numeric_limits<double>::infinity();
    for (double lam : lambdas) {
        const double v = detail::mixture_volume(e1, e2, lam, ctx);
        worst = std::max(worst, v - 2.0 * v1);
        if (v > best_volume) {
            best_volume = v;
            peak = lam;
        }
    }
    r.worst_violation = worst;
    const bool peak_centered = std::abs(peak - 0.5) <= 0.5 * max_gap + 1e-12;
    r.pass = worst <= r.tolerance && peak_centered;
    AxiomWitness w;
    w.inputs = {e1, e2};
    w.lambda = peak;
    r.witness = std::move(w);
    return r;
}

inline AxiomReport check_uniformity(const Ensemble& e1, const Ensemble& e2,
                                    const VolumeContext& ctx = {}) {
    return check_uniformity(e1, e2, uniform_lambda_grid(), ctx);
}

// ---------------------------------------------------------------------------
// Renyi projection counterexample search

// Random search over correlated two-factor ensembles for positive
// V_alpha(joint) - V_alpha(m1) V_alpha(m2).  pass means a violation WAS
// found: that is the expected outcome for alpha != 1, mirroring the claim
// that the projection inequality survives only in the alpha -> 1 limit.
// Not finding one is reported (pass = false), never thrown.
inline AxiomReport renyi_projection_violation_search(double alpha, std::size_t dim1, std::size_t dim2,
                                                     std::size_t trials, Rng& rng,
                                                     const VolumeContext& ctx = {},
                                                     Kind kind = Kind::classical) {
    if (alpha <= 0.0 || std::abs(alpha - 1.0) < 1e-12)
        throw ValidationError("renyi_projection_violation_search: order must be positive and differ from 1");
    if (dim1 < 2 || dim2 < 2)
        throw ValidationError("renyi_projection_violation_search: factor dimensions must be at least 2");
    if (kind == Kind::gaussian)
        throw UnsupportedError("renyi_projection_violation_search: Gaussian ensembles have no Renyi volume here");

    AxiomReport r;
    r.axiom = AxiomId::renyi_projection;
    r.trials = trials;
    r.tolerance = 1e-12; // a violation counts once it clears roundoff
    r.seed = rng.seed();
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < trials; ++t) {
        Ensemble joint;
        if (kind == Kind::classical) {
            joint = random_distribution({dim1, dim2}, rng);
        } else {
            const std::size_t dim = dim1 * dim2;
            const auto rho = random_density(dim, rng.uniform_int(1, dim), rng);
            joint = DensityOperator({dim1, dim2}, rho.matrix);
        }
        const double v = detail::renyi_projection_violation(joint, alpha, ctx);
        if (v > best) {
            best = v;
            AxiomWitness w;
            w.inputs = {std::move(joint)};
            w.alpha = alpha;
            r.witness = std::move(w);
        }
    }
    r.worst_violation = trials == 0 ? 0.0 : best;
    r.pass = r.worst_violation > r.tolerance;
    return r;
}

// ---------------------------------------------------------------------------
// Fuzz drivers

struct FuzzConfig {
    Kind kind = Kind::quantum;
    std::size_t trials = 1000;
    std::uint64_t seed = 42;
    std::size_t dim_lo = 2;        // per-factor size; Gaussian kinds read this as a dof range
    std::size_t dim_hi = 4;
    double alpha = 2.0;            // renyi search only
    std::size_t lambda_grid = 101; // uniformity only
};

namespace detail {

inline Ensemble random_single_factor(Kind kind, std::size_t lo, std::size_t hi, Rng& rng) {
    const std::size_t d = rng.uniform_int(lo, hi);
    switch (kind) {
        case Kind::classical: return random_distribution({d}, rng);
        case Kind::quantum: return random_density(d, rng.uniform_int(1, d), rng);
        case Kind::gaussian: return random_gaussian(d, rng);
    }
    throw ValidationError("random_single_factor: unknown kind");
}

inline Transform random_transform(const Ensemble& e, Rng& rng) {
    if (const auto* c = std::get_if<ClassicalDistribution>(&e))
        return random_permutation(c->outcome_count(), rng);
    if (const auto* q = std::get_if<DensityOperator>(&e)) return random_unitary(q->dim(), rng);
    return random_symplectic(std::get<GaussianEnsemble>(e).dof, rng);
}

inline Ensemble random_two_factor(Kind kind, std::size_t lo, std::size_t hi, Rng& rng) {
    const std::size_t d1 = rng.uniform_int(lo, hi);
    const std::size_t d2 = rng.uniform_int(lo, hi);
    switch (kind) {
        case Kind::classical: return random_distribution({d1, d2}, rng);
        case Kind::quantum: {
            const auto rho = random_density(d1 * d2, rng.uniform_int(1, d1 * d2), rng);
            return DensityOperator({d1, d2}, rho.matrix);
        }
        case Kind::gaussian: return random_gaussian(2, rng);
    }
    throw ValidationError("random_two_factor: unknown kind");
}

// Orthogonal equal-volume pair: one spectrum placed on complementary blocks
// of a doubled space (classical: complementary supports).  Quantum pairs are
// conjugated by a shared random unitary so the check sees dense matrices.
inline std::pair<Ensemble, Ensemble> random_orthogonal_pair(Kind kind, std::size_t lo, std::size_t hi,
                                                            Rng& rng) {
    const std::size_t d = rng.uniform_int(lo, hi);
    std::vector<double> p = random_simplex(d, rng);
    std::vector<double> q = p;
    const auto perm = random_permutation(d, rng);
    for (std::size_t i = 0; i < d; ++i) q[perm[i]] = p[i];
    if (kind == Kind::classical) {
        std::vector<double> p1(2 * d, 0.0), p2(2 * d, 0.0);
        for (std::size_t i = 0; i < d; ++i) {
            p1[i] = p[i];
            p2[d + i] = q[i];
        }
        return {ClassicalDistribution({2 * d}, std::move(p1)),
                ClassicalDistribution({2 * d}, std::move(p2))};
    }
    if (kind == Kind::quantum) {
        std::vector<double> diag1(2 * d, 0.0), diag2(2 * d, 0.0);
        for (std::size_t i = 0; i < d; ++i) {
            diag1[i] = p[i];
            diag2[d + i] = q[i];
        }
        const ComplexMatrix u = random_unitary(2 * d, rng);
        return {apply_unitary(DensityOperator({2 * d}, ComplexMatrix::diagonal(diag1)), u),
                apply_unitary(DensityOperator({2 * d}, ComplexMatrix::diagonal(diag2)), u)};
    }
    throw UnsupportedError("uniformity fuzzing: Gaussian mixtures are not Gaussian");
}

} // namespace detail

// Seeded random-input sweep of one axiom; the report keeps the worst trial
// as its witness.  trials = 0 yields a vacuous pass.
inline AxiomReport fuzz_axiom(AxiomId axiom, const FuzzConfig& cfg, const VolumeContext& ctx = {}) {
    if (cfg.dim_lo < 1 || cfg.dim_hi < cfg.dim_lo)
        throw ValidationError("fuzz_axiom: dimension range is empty");
    if ((axiom == AxiomId::invariance || axiom == AxiomId::uniformity ||
         axiom == AxiomId::renyi_projection) &&
        cfg.kind != Kind::gaussian && cfg.dim_lo < 2)
        throw ValidationError("fuzz_axiom: per-factor dimensions below 2 are degenerate here");

    // Zero trials asserts nothing, for every axiom: an empty passing report.
    if (cfg.trials == 0) {
        AxiomReport empty;
        empty.axiom = axiom;
        empty.trials = 0;
        empty.seed = cfg.seed;
        empty.tolerance = axiom == AxiomId::renyi_projection ? 1e-12 : 1e-9;
        empty.worst_violation = 0.0;
        empty.pass = true;
        return empty;
    }

    Rng rng(cfg.seed);
    if (axiom == AxiomId::renyi_projection) {
        auto r = renyi_projection_violation_search(cfg.alpha, std::max<std::size_t>(cfg.dim_lo, 2),
                                                   std::max<std::size_t>(cfg.dim_lo, 2), cfg.trials,
                                                   rng, ctx, cfg.kind);
        r.seed = cfg.seed;
        return r;
    }

    AxiomReport r;
    r.axiom = axiom;
    r.trials = cfg.trials;
    r.seed = cfg.seed;
    r.tolerance = 1e-9;
    r.worst_violation = -std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        AxiomReport one;
        switch (axiom) {
            case AxiomId::invariance: {
                const Ensemble e = detail::random_single_factor(cfg.kind, cfg.dim_lo, cfg.dim_hi, rng);
                one = check_invariance(e, detail::random_transform(e, rng), ctx);
                break;
            }
            case AxiomId::cartesian: {
                const Ensemble e1 = detail::random_single_factor(cfg.kind, cfg.dim_lo, cfg.dim_hi, rng);
                const Ensemble e2 = detail::random_single_factor(cfg.kind, cfg.dim_lo, cfg.dim_hi, rng);
                one = check_cartesian(e1, e2, ctx);
                break;
            }
            case AxiomId::projection:
                one = check_projection(detail::random_two_factor(cfg.kind, cfg.dim_lo, cfg.dim_hi, rng), ctx);
                break;
            case AxiomId::uniformity: {
                const auto [e1, e2] = detail::random_orthogonal_pair(cfg.kind, cfg.dim_lo, cfg.dim_hi, rng);
                one = check_uniformity(e1, e2, uniform_lambda_grid(cfg.lambda_grid), ctx);
                break;
            }
            default:
                throw ValidationError("fuzz_axiom: unknown axiom");
        }
        if (!one.pass) r.pass = false;
        if (one.worst_violation > r.worst_violation) {
            r.worst_violation = one.worst_violation;
            r.witness = std::move(one.witness);
        }
    }
    if (r.worst_violation > r.tolerance) r.pass = false;
    return r;
}

} // namespace ensvol
