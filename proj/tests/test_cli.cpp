// Drives the installed binary end to end through popen: payload contents,
// exit codes, seed handling, and byte-level determinism.  The harness passes
// the binary and fixture locations through ENSVOL_CLI / ENSVOL_FIXTURES.

#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <string>

#include <json.hpp>

#include "ensvol/ensvol.hpp"

using Json = nlohmann::json;

namespace {

struct RunResult {
    int status = -1;
    std::string out;
};

std::string cli_path() {
    const char* p = std::getenv("ENSVOL_CLI");
    REQUIRE(p != nullptr);
    return p;
}

std::string fixture(const std::string& name) {
    const char* d = std::getenv("ENSVOL_FIXTURES");
    REQUIRE(d != nullptr);
    return std::string(d) + "/" + name;
}

// Runs `<cli> args`, capturing stdout; stderr is dropped unless merge_stderr.
RunResult run(const std::string& args, bool merge_stderr = false, const std::string& env = "") {
    const std::string cmd = env + (env.empty() ? "" : " ") + "\"" + cli_path() + "\" " + args +
                            (merge_stderr ? " 2>&1" : " 2>/dev/null");
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    char buf[4096];
    while (std::size_t got = std::fread(buf, 1, sizeof buf, pipe)) r.out.append(buf, got);
    const int raw = pclose(pipe);
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return r;
}

Json payload(const RunResult& r) {
    REQUIRE_FALSE(r.out.empty());
    return Json::parse(r.out);
}

} // namespace

TEST_CASE("entropy command reports nats and bits") {
    const auto r = run("entropy \"" + fixture("classical_uniform2.json") + "\"");
    REQUIRE(r.status == 0);
    const Json j = payload(r);
    REQUIRE(j["pass"] == true);
    REQUIRE(std::abs(j["results"]["value"].get<double>() - 0.6931471805599453) < 1e-12);
    REQUIRE(j["results"]["units"] == "nats");
    REQUIRE(j["version"].is_string());
    REQUIRE(j["command"].is_array());

    const auto bits = run("entropy --bits \"" + fixture("classical_uniform2.json") + "\"");
    REQUIRE(std::abs(payload(bits)["results"]["value"].get<double>() - 1.0) < 1e-12);
}

TEST_CASE("entropy command handles orders and quantum documents") {
    const auto r =
        run("entropy --alpha 2 \"" + fixture("classical_joint.json") + "\"");
    REQUIRE(r.status == 0);
    // Collision entropy of (0.8, 0.1, 0.1, 0): -ln 0.66.
    REQUIRE(std::abs(payload(r)["results"]["value"].get<double>() + std::log(0.66)) < 1e-12);

    const auto q = run("entropy \"" + fixture("quantum_mixed.json") + "\"");
    REQUIRE(q.status == 0);
    const double want = -(0.75 * std::log(0.75) + 0.25 * std::log(0.25));
    REQUIRE(std::abs(payload(q)["results"]["value"].get<double>() - want) < 1e-12);
}

TEST_CASE("volume command scales by the registered constants") {
    const auto r = run("volume --default-k 5 \"" + fixture("classical_uniform2.json") + "\"");
    REQUIRE(r.status == 0);
    const Json j = payload(r);
    REQUIRE(std::abs(j["results"]["volume"].get<double>() - 10.0) < 1e-10);
    REQUIRE(std::abs(j["results"]["microstate_count"].get<double>() - 2.0) < 1e-12);

    const auto labeled = run("volume --k mode=3 \"" + fixture("gaussian_unit.json") + "\"");
    REQUIRE(labeled.status == 0); // unlabeled factor: the constant is inert, default 1 applies
    const double cell = std::log(2.0 * 3.141592653589793 * 2.718281828459045);
    REQUIRE(std::abs(payload(labeled)["results"]["log_volume"].get<double>() - cell) < 1e-10);
}

TEST_CASE("chi command checks the prior-entropy ceiling") {
    const auto r = run("chi \"" + fixture("signal_zero_plus.json") + "\"");
    REQUIRE(r.status == 0);
    const Json j = payload(r);
    REQUIRE(j["pass"] == true);
    REQUIRE(std::abs(j["results"]["chi"]["nats"].get<double>() - 0.41649553069968745) < 1e-9);
    REQUIRE(std::abs(j["results"]["lanford_robinson"]["slack"].get<double>() -
                     0.27665164986025786) < 1e-9);
    REQUIRE(j["results"]["lanford_robinson"]["pass"] == true);
}

TEST_CASE("bounds command reports the block chain for each code family") {
    const auto iid = run("bounds --length 2 \"" + fixture("signal_zero_plus.json") + "\"");
    REQUIRE(iid.status == 0);
    const Json j = payload(iid);
    REQUIRE(j["pass"] == true);
    REQUIRE(j["results"]["code"] == "iid");
    REQUIRE(j["results"]["block_bounds"]["pass"] == true);
    // Independent blocks make the chain tight.
    const double lb = j["results"]["block_bounds"]["log_volume_block"].get<double>();
    const double lp = j["results"]["block_bounds"]["log_volume_power"].get<double>();
    REQUIRE(std::abs(lb - lp) < 1e-9);

    const auto type = run("bounds --length 2 --code type \"" +
                          fixture("signal_orthogonal.json") + "\"");
    REQUIRE(type.status == 0);
    REQUIRE(payload(type)["results"]["block_bounds"]["pass"] == true);

    const auto rnd = run("bounds --length 3 --code random --blocks 12 --seed 9 \"" +
                         fixture("signal_zero_plus.json") + "\"");
    REQUIRE(rnd.status == 0);
    const Json rj = payload(rnd);
    REQUIRE(rj["seed"] == 9);
    REQUIRE(rj["results"]["block_bounds"]["pass"] == true);
    REQUIRE(rj["results"]["block_bounds"]["block_projection"]["slack"].get<double>() >= -1e-9);
}

TEST_CASE("gaussian command evolves and checks trajectories") {
    const auto grow = run("gaussian \"" + fixture("gaussian_unit.json") + "\" --process \"" +
                          fixture("process_diffusion.json") + "\" --dt 0.01 --steps 100");
    REQUIRE(grow.status == 0);
    const Json gj = payload(grow);
    REQUIRE(gj["pass"] == true);
    const auto& pts = gj["results"]["trajectory"]["points"];
    const double ratio = pts.back()["volume"].get<double>() / pts.front()["volume"].get<double>();
    REQUIRE(std::abs(ratio - 2.0) < 1e-5);
    REQUIRE(gj["results"]["trajectory"]["strictly_increasing"] == true);

    const auto rot = run("gaussian \"" + fixture("gaussian_wide.json") + "\" --process \"" +
                         fixture("process_rotation.json") + "\" --dt 0.01 --steps 100");
    REQUIRE(rot.status == 0);
    const Json rj = payload(rot);
    REQUIRE(rj["pass"] == true);
    REQUIRE(rj["results"]["trajectory"]["monotone_required"] == false);

    // Without a process the command just reports entropy and volume.
    const auto plain = run("gaussian \"" + fixture("gaussian_wide.json") + "\"");
    REQUIRE(plain.status == 0);
    REQUIRE(payload(plain)["results"].contains("entropy"));
}

TEST_CASE("uncertainty command accepts documents and synthesized packets") {
    const auto file = run("uncertainty \"" + fixture("wavefunction_packet.json") + "\"");
    REQUIRE(file.status == 0);
    const Json fj = payload(file);
    REQUIRE(fj["pass"] == true);
    REQUIRE(fj["results"]["entropic_uncertainty"]["pass"] == true);

    const auto synth = run("uncertainty --grid 1024 --spacing 0.05 --sigma 1");
    REQUIRE(synth.status == 0);
    const Json sj = payload(synth);
    // ln(pi e) for the minimum-uncertainty packet.
    REQUIRE(std::abs(sj["results"]["sum_nats"].get<double>() - 2.1447298858494002) < 1e-3);
    REQUIRE(std::abs(sj["results"]["heisenberg"]["moment_product"].get<double>() - 0.5) < 1e-5);

    const auto peaks = run("uncertainty --grid 1024 --spacing 0.05 --sigma 1 --two-peak 6");
    REQUIRE(peaks.status == 0);
    REQUIRE(payload(peaks)["results"]["entropic_uncertainty"]["slack"].get<double>() >
            0.30685281944005469);
}

TEST_CASE("correspondence command reports the planck-cell limit") {
    const auto r = run("correspondence --ratio-at 10000 --sweep 10 --sweep 100 --sweep 1000 "
                       "--sweep 10000");
    REQUIRE(r.status == 0);
    const Json j = payload(r);
    REQUIRE(j["pass"] == true);
    REQUIRE(j["results"]["sweep_monotone"] == true);
    REQUIRE(std::abs(j["results"]["ratio"].get<double>() - 6.2831853045615926) < 1e-10);
    REQUIRE(j["results"]["relative_error"].get<double>() < 1e-3);

    const auto doubled = run("correspondence --ratio-at 10000 --hbar 2");
    REQUIRE(doubled.status == 0);
    REQUIRE(std::abs(payload(doubled)["results"]["limit"].get<double>() -
                     2.0 * 6.2831853071795865) < 1e-12);
}

TEST_CASE("fuzz command passes the axioms and finds the order-two counterexample") {
    const auto ii = run("fuzz --axiom ii --trials 200 --seed 7");
    REQUIRE(ii.status == 0);
    const Json j = payload(ii);
    REQUIRE(j["pass"] == true);
    REQUIRE(j["results"]["worst_violation"].get<double>() < 1e-9);
    REQUIRE(j["seed"] == 7);

    const auto renyi = run("fuzz --axiom renyi --alpha 2 --kind classical --trials 5000 --seed 7");
    REQUIRE(renyi.status == 0); // success here means a violation WAS exhibited
    const Json rj = payload(renyi);
    REQUIRE(rj["pass"] == true);
    REQUIRE(rj["results"]["worst_violation"].get<double>() > 1e-6);
    REQUIRE(rj["results"]["witness"].is_object());

    const auto empty = run("fuzz --axiom renyi --trials 0");
    REQUIRE(empty.status == 0); // zero trials assert nothing
    REQUIRE(payload(empty)["results"]["worst_violation"] == 0.0);

    const auto iv = run("fuzz --axiom iv --kind classical --trials 50 --seed 3");
    REQUIRE(iv.status == 0);

    const auto gaussian = run("fuzz --axiom i --kind gaussian --trials 50 --seed 3");
    REQUIRE(gaussian.status == 0);
}

TEST_CASE("identical seeds reproduce payloads byte for byte") {
    const std::string cmds[] = {
        "entropy \"" + fixture("classical_joint.json") + "\"",
        "chi \"" + fixture("signal_zero_plus.json") + "\"",
        "bounds --length 3 --code random --blocks 10 --seed 11 \"" +
            fixture("signal_zero_plus.json") + "\"",
        "fuzz --axiom iii --trials 60 --seed 11",
        "uncertainty --grid 512 --spacing 0.07 --sigma 1",
        "correspondence --sweep 10 --sweep 100",
    };
    for (const auto& cmd : cmds) {
        INFO(cmd);
        const auto first = run(cmd);
        const auto second = run(cmd);
        REQUIRE(first.status == 0);
        REQUIRE(second.status == 0);
        REQUIRE(first.out == second.out);
    }

    // Different seeds genuinely change random-path payloads.
    const auto a = run("fuzz --axiom iii --trials 60 --seed 11");
    const auto b = run("fuzz --axiom iii --trials 60 --seed 12");
    REQUIRE(a.out != b.out);
}

TEST_CASE("the seed environment variable fills in when no flag is given") {
    const auto r = run("fuzz --axiom ii --trials 20", false, "ENSVOL_SEED=123");
    REQUIRE(r.status == 0);
    REQUIRE(payload(r)["seed"] == 123);

    // Explicit flag wins over the environment.
    const auto flag = run("fuzz --axiom ii --trials 20 --seed 9", false, "ENSVOL_SEED=123");
    REQUIRE(payload(flag)["seed"] == 9);

    const auto bad = run("fuzz --axiom ii --trials 20", true, "ENSVOL_SEED=pizza");
    REQUIRE(bad.status == 2);
}

TEST_CASE("invalid input exits 2 with a diagnostic") {
    const auto missing = run("entropy /no/such/file.json", true);
    REQUIRE(missing.status == 2);
    REQUIRE(missing.out.find("error") != std::string::npos);

    const auto malformed = run("entropy \"" + fixture("malformed.json") + "\"", true);
    REQUIRE(malformed.status == 2);
    REQUIRE(malformed.out.find("parse") != std::string::npos);

    const auto wrong_kind = run("gaussian \"" + fixture("classical_uniform2.json") + "\"", true);
    REQUIRE(wrong_kind.status == 2);

    const auto bad_sub = run("frobnicate", true);
    REQUIRE(bad_sub.status == 2);

    const auto bad_axiom = run("fuzz --axiom vii", true);
    REQUIRE(bad_axiom.status == 2);

    const auto bad_alpha = run("entropy --alpha -1 \"" + fixture("classical_uniform2.json") + "\"",
                               true);
    REQUIRE(bad_alpha.status == 2);

    const auto gaussian_renyi =
        run("entropy --alpha 2 \"" + fixture("gaussian_unit.json") + "\"", true);
    REQUIRE(gaussian_renyi.status == 2);
}

TEST_CASE("numerical failure exits 3 and names the step") {
    const auto r = run("gaussian \"" + fixture("gaussian_unit.json") + "\" --process \"" +
                       fixture("process_stiff.json") + "\" --dt 1 --steps 5", true);
    REQUIRE(r.status == 3);
    REQUIRE(r.out.find("step") != std::string::npos);
}

TEST_CASE("inequality failure exits 1 while still printing the payload") {
    // A renyi search with far too few trials to find anything: honest failure.
    const auto r = run("fuzz --axiom renyi --kind classical --trials 1 --seed 1");
    if (r.status == 0) {
        // One lucky draw can violate; only a found violation justifies exit 0.
        REQUIRE(payload(r)["results"]["worst_violation"].get<double>() > 0.0);
    } else {
        REQUIRE(r.status == 1);
        REQUIRE(payload(r)["pass"] == false);
    }
}

// ---------------------------------------------------------------------------
// Golden anchor registry: fixtures/golden/anchors.json pins every derived
// numeric value in one language-neutral file.  "cli" records replay a command
// and pull the value out of the payload by JSON pointer; "library" records
// evaluate the matching closed-form quantity directly.

namespace {

std::map<std::string, std::function<double()>> library_quantities() {
    using namespace ensvol;

    auto basis = [](std::size_t which) {
        ComplexMatrix m(2, 2);
        m(which, which) = 1.0;
        return DensityOperator({2}, m);
    };
    auto plus = [] {
        ComplexMatrix m(2, 2);
        m(0, 0) = m(0, 1) = m(1, 0) = m(1, 1) = 0.5;
        return DensityOperator({2}, m);
    };
    auto flip = [] {
        ComplexMatrix x(2, 2);
        x(0, 1) = x(1, 0) = 1.0;
        return x;
    };
    auto joint = [] { return Ensemble(ClassicalDistribution({2, 2}, {0.8, 0.1, 0.1, 0.0})); };
    auto det2 = [](const RealMatrix& m) { return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0); };
    auto diffusion_trajectory = [] {
        const GaussianEnsemble unit(1, {0.0, 0.0}, RealMatrix::identity(2));
        const OuProcess p(RealMatrix(2, 2), RealMatrix::identity(2));
        return ou_evolve(unit, p, 0.01, 100);
    };

    std::map<std::string, std::function<double()>> q;
    q["flip_eigenvalue_low"] = [=] { return hermitian_eigen(flip()).eigenvalues.front(); };
    q["flip_eigenvalue_high"] = [=] { return hermitian_eigen(flip()).eigenvalues.back(); };
    q["kron_flip_diag23_corner"] = [=] {
        return kron(flip(), ComplexMatrix::diagonal({2.0, 3.0}))(0, 2).real();
    };
    for (std::size_t d = 0; d < 4; ++d)
        q["kron_zero_half_diag_" + std::to_string(d)] = [=] {
            const ComplexMatrix half = 0.5 * ComplexMatrix::identity(2);
            return kron(basis(0).matrix, half)(d, d).real();
        };
    q["reduce_joint_first_cell"] = [=] {
        return std::get<ClassicalDistribution>(reduce(joint(), 0)).probabilities[0];
    };
    q["reduce_joint_second_cell"] = [=] {
        return std::get<ClassicalDistribution>(reduce(joint(), 0)).probabilities[1];
    };
    auto zero_plus_mix = [=] {
        return std::get<DensityOperator>(
            mix(SignalEnsemble({Ensemble(basis(0)), Ensemble(plus())}, {0.5, 0.5})));
    };
    q["mix_zero_plus_corner"] = [=] { return zero_plus_mix().matrix(0, 0).real(); };
    q["mix_zero_plus_offdiag"] = [=] { return zero_plus_mix().matrix(0, 1).real(); };
    q["overlap_zero_plus"] = [=] { return overlap(Ensemble(basis(0)), Ensemble(plus())); };
    q["hadamard_zero_offdiag"] = [=] {
        const double s = 1.0 / std::sqrt(2.0);
        ComplexMatrix h(2, 2);
        h(0, 0) = h(0, 1) = h(1, 0) = s;
        h(1, 1) = -s;
        return apply_unitary(basis(0), h).matrix(0, 1).real();
    };
    q["bell_projection_violation"] = [] {
        ComplexMatrix b(4, 4);
        b(0, 0) = b(0, 3) = b(3, 0) = b(3, 3) = 0.5;
        return check_projection(Ensemble(DensityOperator({2, 2}, b))).worst_violation;
    };
    q["collision_projection_violation"] = [=] {
        return detail::renyi_projection_violation(joint(), 2.0, {});
    };
    q["order_one_projection_violation"] = [=] { return check_projection(joint()).worst_violation; };
    q["uniformity_peak_volume"] = [=] {
        return volume(mix(SignalEnsemble({Ensemble(basis(0)), Ensemble(basis(1))}, {0.5, 0.5})));
    };
    q["diffusion_covariance_t1"] = [=] {
        return diffusion_trajectory().states.back().covariance(0, 0);
    };
    q["rotation_determinant_drift"] = [=] {
        RealMatrix a(2, 2);
        a(0, 1) = 1.0;
        a(1, 0) = -1.0;
        RealMatrix cov = RealMatrix::identity(2);
        cov(0, 0) = 4.0;
        const auto traj = ou_evolve(GaussianEnsemble(1, {0.0, 0.0}, cov),
                                    OuProcess(a, RealMatrix(2, 2)), 0.01, 100);
        return std::abs(det2(traj.states.back().covariance) -
                        det2(traj.states.front().covariance));
    };
    q["diffusion_volume_ratio"] = [=] {
        const auto rep = volume_trajectory(diffusion_trajectory());
        return rep.points.back().volume / rep.points.front().volume;
    };
    q["thermal_ratio_1e1"] = [] { return correspondence_ratio_at(10.0); };
    q["thermal_ratio_1e2"] = [] { return correspondence_ratio_at(100.0); };
    q["thermal_ratio_1e3"] = [] { return correspondence_ratio_at(1000.0); };
    q["typical_count_09_L1"] = [] { return std::exp(typical_count_log({0.9, 0.1}, 1)); };
    return q;
}

} // namespace

TEST_CASE("golden anchor registry holds through the tool and the library") {
    std::ifstream in(fixture("golden/anchors.json"));
    REQUIRE(in.good());
    const Json records = Json::parse(in);
    REQUIRE(records.is_array());
    REQUIRE_FALSE(records.empty());

    const auto quantities = library_quantities();
    std::map<std::string, Json> cache; // several records read one payload
    std::size_t cli_records = 0, library_records = 0;

    for (const auto& rec : records) {
        INFO(rec.at("name").get<std::string>());
        const double expect = rec.at("expect").get<double>();
        const double tolerance = rec.at("tolerance").get<double>();
        double got = 0.0;
        if (rec.at("check") == "cli") {
            ++cli_records;
            std::string args;
            for (const auto& a : rec.at("argv")) {
                std::string word = a.get<std::string>();
                if (!word.empty() && word.front() == '@')
                    word = "\"" + fixture(word.substr(1)) + "\"";
                args += (args.empty() ? "" : " ") + word;
            }
            auto it = cache.find(args);
            if (it == cache.end()) {
                const auto r = run(args);
                REQUIRE(r.status == 0);
                it = cache.emplace(args, payload(r)).first;
            }
            const auto ptr = Json::json_pointer(rec.at("pointer").get<std::string>());
            got = it->second.at(ptr).get<double>();
        } else {
            ++library_records;
            const auto qit = quantities.find(rec.at("quantity").get<std::string>());
            REQUIRE(qit != quantities.end());
            got = qit->second();
        }
        REQUIRE_THAT(got, Catch::Matchers::WithinAbs(expect, tolerance));
    }
    REQUIRE(cli_records > 0);
    REQUIRE(library_records > 0);
}
