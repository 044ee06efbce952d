#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <string>
#include <vector>

#include "ensvol/axioms.hpp"
#include "ensvol/symplectic.hpp"
#include "oracles.hpp"

using namespace ensvol;

namespace {

Ensemble basis_state(std::size_t which) {
    ComplexMatrix m(2, 2);
    m(which, which) = 1.0;
    return DensityOperator({2}, m);
}

// The correlated joint whose collision volume exceeds its marginal product.
Ensemble pinned_joint() {
    return ClassicalDistribution({2, 2}, {0.8, 0.1, 0.1, 0.0});
}

} // namespace

TEST_CASE("axiom labels round-trip") {
    for (auto id : {AxiomId::invariance, AxiomId::cartesian, AxiomId::projection,
                    AxiomId::uniformity, AxiomId::renyi_projection})
        REQUIRE(axiom_from_label(axiom_label(id)) == id);
    REQUIRE(std::string(axiom_label(AxiomId::invariance)) == "i");
    REQUIRE(std::string(axiom_label(AxiomId::renyi_projection)) == "renyi");
    REQUIRE_THROWS_AS(axiom_from_label("v"), ValidationError);
}

TEST_CASE("transforms apply kind by kind and reject mismatches") {
    Rng rng(5);
    const Ensemble rho = random_density(3, 3, rng);
    const Transform u = random_unitary(3, rng);
    REQUIRE_NOTHROW(apply_transform(rho, u));
    REQUIRE_THROWS_AS(apply_transform(rho, Transform(std::vector<std::size_t>{1, 0, 2})),
                      ValidationError);

    const Ensemble c = ClassicalDistribution({3}, {0.5, 0.3, 0.2});
    REQUIRE_NOTHROW(apply_transform(c, Transform(std::vector<std::size_t>{2, 0, 1})));
    REQUIRE_THROWS_AS(apply_transform(c, u), ValidationError);

    const Ensemble g = GaussianEnsemble(1, {0.0, 0.0}, RealMatrix::identity(2));
    REQUIRE_NOTHROW(apply_transform(g, Transform(symplectic_form(1)))); // J itself is symplectic
    REQUIRE_THROWS_AS(apply_transform(g, Transform(std::vector<std::size_t>{0, 1})),
                      ValidationError);
}

TEST_CASE("volume is invariant under each family's symmetry group") {
    Rng rng(11);

    const Ensemble rho = random_density(4, 4, rng);
    const auto qr = check_invariance(rho, Transform(random_unitary(4, rng)));
    REQUIRE(qr.pass);
    REQUIRE(qr.worst_violation < 1e-10);

    const Ensemble c = random_distribution({5}, rng);
    const auto cr = check_invariance(c, Transform(random_permutation(5, rng)));
    REQUIRE(cr.pass);
    REQUIRE(cr.worst_violation < 1e-12);

    const Ensemble g = random_gaussian(2, rng);
    const auto gr = check_invariance(g, Transform(random_symplectic(2, rng)));
    REQUIRE(gr.pass);
    REQUIRE(gr.worst_violation < 1e-9);

    // The report carries a witness that reproduces its number exactly.
    REQUIRE(qr.witness.has_value());
    REQUIRE(evaluate_witness(AxiomId::invariance, *qr.witness) == qr.worst_violation);
}

TEST_CASE("volumes multiply over uncorrelated composition") {
    Rng rng(13);
    const auto cr = check_cartesian(random_distribution({3}, rng), random_distribution({4}, rng));
    REQUIRE(cr.pass);
    const auto qr = check_cartesian(Ensemble(random_density(2, 2, rng)),
                                    Ensemble(random_density(3, 3, rng)));
    REQUIRE(qr.pass);
    const auto gr = check_cartesian(Ensemble(random_gaussian(1, rng)),
                                    Ensemble(random_gaussian(2, rng)));
    REQUIRE(gr.pass);

    REQUIRE(evaluate_witness(AxiomId::cartesian, *qr.witness) == qr.worst_violation);

    // Composition with labeled constants stays multiplicative.
    VolumeContext ctx;
    ctx.k_constants["a"] = 2.0;
    ctx.default_k = 3.0;
    const Ensemble left = ClassicalDistribution({2}, {0.5, 0.5}, {"a"});
    const Ensemble right = ClassicalDistribution({2}, {0.9, 0.1});
    REQUIRE(check_cartesian(left, right, ctx).pass);
}

TEST_CASE("projection holds at alpha = 1 and the pinned joint quantifies the slack") {
    const auto pr = check_projection(pinned_joint());
    REQUIRE(pr.pass);
    // Signed slack: V(joint) - V(m1) V(m2), negative when satisfied.
    REQUIRE(std::abs(pr.worst_violation - oracle::alpha_one_violation) < 1e-12);
    REQUIRE(evaluate_witness(AxiomId::projection, *pr.witness) == pr.worst_violation);

    Rng rng(17);
    for (int round = 0; round < 25; ++round) {
        const auto r = check_projection(random_distribution({3, 3}, rng));
        REQUIRE(r.pass);
    }
}

TEST_CASE("projection requires at least two factors") {
    REQUIRE_THROWS_AS(check_projection(Ensemble(ClassicalDistribution({2}, {0.5, 0.5}))),
                      ValidationError);
}

TEST_CASE("projection generalizes to more than two quantum factors") {
    Rng rng(19);
    ComplexMatrix m = random_density(8, 8, rng).matrix;
    const DensityOperator rho({2, 2, 2}, m);
    const auto r = check_projection(Ensemble(rho));
    REQUIRE(r.pass);
    REQUIRE(r.worst_violation <= 1e-9);
}

TEST_CASE("equal-volume orthogonal mixtures peak at even weighting") {
    const Ensemble zero = basis_state(0), one = basis_state(1);
    const auto r = check_uniformity(zero, one, uniform_lambda_grid(101));
    REQUIRE(r.pass);
    REQUIRE(r.witness.has_value());
    REQUIRE(*r.witness->lambda == 0.5);
    REQUIRE(r.worst_violation <= 1e-9);
    // The ceiling is attained: worst = max V - 2 V1 = 0 at lam = 1/2.
    REQUIRE(std::abs(r.worst_violation) < 1e-12);

    // The sweep value away from the peak follows the binary-entropy curve.
    const SignalEnsemble at03({zero, one}, {0.3, 0.7});
    REQUIRE(std::abs(volume(mix(at03)) - oracle::exp_binary_entropy_03) < 1e-12);

    // Classical version.
    const Ensemble ca = ClassicalDistribution({2}, {1.0, 0.0});
    const Ensemble cb = ClassicalDistribution({2}, {0.0, 1.0});
    REQUIRE(check_uniformity(ca, cb).pass);
}

TEST_CASE("uniformity preconditions reject overlap and unequal volumes") {
    const Ensemble zero = basis_state(0);
    ComplexMatrix plus(2, 2);
    plus(0, 0) = plus(0, 1) = plus(1, 0) = plus(1, 1) = 0.5;
    REQUIRE_THROWS_AS(check_uniformity(zero, Ensemble(DensityOperator({2}, plus))),
                      ValidationError);

    const Ensemble small = ClassicalDistribution({3}, {1.0, 0.0, 0.0});
    const Ensemble big = ClassicalDistribution({3}, {0.0, 0.5, 0.5});
    REQUIRE_THROWS_AS(check_uniformity(small, big), ValidationError);

    REQUIRE_THROWS_AS(
        check_uniformity(zero, basis_state(1), std::vector<double>{0.5, 1.5}),
        ValidationError);
    REQUIRE_THROWS_AS(check_uniformity(zero, basis_state(1), std::vector<double>{}),
                      ValidationError);
}

TEST_CASE("collision-order volumes violate projection on the pinned joint") {
    const double v = detail::renyi_projection_violation(pinned_joint(), 2.0, {});
    REQUIRE(std::abs(v - oracle::collision_violation) < 1e-12);
    REQUIRE(v > 0.0);

    // Same witness through the public evaluator.
    AxiomWitness w;
    w.inputs = {pinned_joint()};
    w.alpha = 2.0;
    REQUIRE(evaluate_witness(AxiomId::renyi_projection, w) == v);
}

TEST_CASE("random search finds collision-order violations and reports honestly") {
    Rng rng(7);
    const auto r = renyi_projection_violation_search(2.0, 2, 2, 2000, rng);
    REQUIRE(r.pass); // pass means: violation found
    REQUIRE(r.worst_violation > 1e-6);
    REQUIRE(r.witness.has_value());
    const double again = evaluate_witness(AxiomId::renyi_projection, *r.witness);
    REQUIRE(again == r.worst_violation);

    // Zero trials find nothing and say so.
    Rng rng0(7);
    const auto empty = renyi_projection_violation_search(2.0, 2, 2, 0, rng0);
    REQUIRE_FALSE(empty.pass);
    REQUIRE(empty.worst_violation == 0.0);

    Rng rng1(7);
    REQUIRE_THROWS_AS(renyi_projection_violation_search(1.0, 2, 2, 10, rng1), ValidationError);
    REQUIRE_THROWS_AS(renyi_projection_violation_search(-2.0, 2, 2, 10, rng1), ValidationError);
    REQUIRE_THROWS_AS(renyi_projection_violation_search(2.0, 1, 2, 10, rng1), ValidationError);
    REQUIRE_THROWS_AS(
        renyi_projection_violation_search(2.0, 2, 2, 10, rng1, {}, Kind::gaussian),
        UnsupportedError);
}

TEST_CASE("fuzzing the axioms passes across all three families") {
    for (Kind kind : {Kind::classical, Kind::quantum, Kind::gaussian}) {
        FuzzConfig cfg;
        cfg.kind = kind;
        cfg.trials = 60;
        cfg.seed = 99;
        if (kind == Kind::gaussian) {
            cfg.dim_lo = 1;
            cfg.dim_hi = 2;
        }
        for (auto axiom : {AxiomId::invariance, AxiomId::cartesian, AxiomId::projection}) {
            const auto r = fuzz_axiom(axiom, cfg);
            INFO(kind_name(kind) << " axiom " << axiom_label(axiom));
            REQUIRE(r.pass);
            REQUIRE(r.trials == 60);
            REQUIRE(r.seed == 99);
            REQUIRE(r.witness.has_value());
            REQUIRE(evaluate_witness(axiom, *r.witness) == r.worst_violation);
        }
        if (kind != Kind::gaussian) {
            const auto r = fuzz_axiom(AxiomId::uniformity, cfg);
            INFO(kind_name(kind) << " uniformity");
            REQUIRE(r.pass);
            REQUIRE(evaluate_witness(AxiomId::uniformity, *r.witness) == r.worst_violation);
        }
    }
}

TEST_CASE("fuzzing is reproducible by seed and vacuous at zero trials") {
    FuzzConfig cfg;
    cfg.trials = 40;
    cfg.seed = 321;
    const auto a = fuzz_axiom(AxiomId::cartesian, cfg);
    const auto b = fuzz_axiom(AxiomId::cartesian, cfg);
    REQUIRE(a.worst_violation == b.worst_violation);

    cfg.seed = 322;
    const auto c = fuzz_axiom(AxiomId::cartesian, cfg);
    REQUIRE(a.worst_violation != c.worst_violation);

    cfg.trials = 0;
    for (auto axiom : {AxiomId::invariance, AxiomId::cartesian, AxiomId::projection,
                       AxiomId::uniformity, AxiomId::renyi_projection}) {
        const auto r = fuzz_axiom(axiom, cfg);
        REQUIRE(r.pass);
        REQUIRE(r.trials == 0);
        REQUIRE(r.worst_violation == 0.0);
        REQUIRE_FALSE(r.witness.has_value());
    }
}

TEST_CASE("gaussian uniformity fuzzing is rejected as unsupported") {
    FuzzConfig cfg;
    cfg.kind = Kind::gaussian;
    cfg.trials = 5;
    cfg.dim_lo = 1;
    cfg.dim_hi = 1;
    REQUIRE_THROWS_AS(fuzz_axiom(AxiomId::uniformity, cfg), UnsupportedError);
}

TEST_CASE("symplectic generators are exactly symplectic and volume preserving") {
    Rng rng(41);
    for (int round = 0; round < 20; ++round) {
        const std::size_t dof = rng.uniform_int(1, 3);
        const RealMatrix s = random_symplectic(dof, rng);
        REQUIRE(symplectic_defect(s) < 1e-12);
        REQUIRE(is_symplectic(s));
    }
    RealMatrix not_symp = RealMatrix::identity(2);
    not_symp(0, 0) = 2.0; // scales area by 2
    REQUIRE_FALSE(is_symplectic(not_symp));
    const GaussianEnsemble g(1, {0.0, 0.0}, RealMatrix::identity(2));
    REQUIRE_THROWS_AS(apply_symplectic(g, not_symp), ValidationError);
}
