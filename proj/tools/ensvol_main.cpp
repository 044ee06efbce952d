// Command-line front end: parse ensemble documents, run computations and
// axiom fuzzing, emit machine-readable JSON reports on stdout.
//
// Exit codes: 0 success, 1 an inequality check failed, 2 invalid input,
// 3 numerical failure.  Reports echo the command line, the seed, and the
// tool version; identical command + seed reproduces the payload
// byte-identically (no timestamps, sorted keys, shortest-round-trip floats).

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ensvol/ensvol.hpp"

namespace {

using ensvol::Json;

Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ensvol::ValidationError("cannot open input file '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw ensvol::ValidationError("JSON parse failure in '" + path + "': " + e.what());
    }
}

ensvol::VolumeContext make_context(const std::vector<std::string>& k_specs, double default_k,
                                   double hbar) {
    ensvol::VolumeContext ctx;
    ctx.default_k = default_k;
    ctx.hbar = hbar;
    for (const auto& spec : k_specs) {
        const auto pos = spec.find('=');
        if (pos == std::string::npos || pos == 0)
            throw ensvol::ValidationError("--k expects label=value, got '" + spec + "'");
        try {
            ctx.k_constants[spec.substr(0, pos)] = std::stod(spec.substr(pos + 1));
        } catch (const std::exception&) {
            throw ensvol::ValidationError("--k value is not a number in '" + spec + "'");
        }
    }
    return ctx;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("ENSVOL_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw ensvol::ValidationError("ENSVOL_SEED is not an unsigned integer");
        }
    }
    return 42;
}

// lo-hi range or a single size.
std::pair<std::size_t, std::size_t> parse_dims(const std::string& spec) {
    try {
        const auto dash = spec.find('-');
        if (dash == std::string::npos) {
            const std::size_t d = std::stoul(spec);
            return {d, d};
        }
        return {std::stoul(spec.substr(0, dash)), std::stoul(spec.substr(dash + 1))};
    } catch (const std::exception&) {
        throw ensvol::ValidationError("--dims expects N or LO-HI, got '" + spec + "'");
    }
}

struct Emitter {
    std::vector<std::string> argv;
    std::uint64_t seed = 0;

    // rc 0/1 chosen by `pass`; validation and numerical errors bypass this
    // path entirely via exceptions.
    int emit(Json results, bool pass) const {
        Json report;
        report["command"] = argv;
        report["seed"] = seed;
        report["version"] = ensvol::version;
        report["results"] = std::move(results);
        report["pass"] = pass;
        std::cout << report.dump(2) << "\n";
        return pass ? 0 : 1;
    }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ensemble volume toolkit: entropies, V = K e^S, axiom fuzzing, and bounds"};
    app.require_subcommand(1);
    app.fallthrough(); // global flags like --seed may follow the subcommand
    app.set_version_flag("--version", ensvol::version);

    Emitter emitter;
    emitter.argv.assign(argv, argv + argc);

    std::optional<std::uint64_t> seed_flag;
    app.add_option("--seed", seed_flag, "PRNG seed (default: ENSVOL_SEED env or 42)");

    // Shared volume-context flags (declared per subcommand below).
    struct CtxFlags {
        std::vector<std::string> k_specs;
        double default_k = 1.0;
        double hbar = 1.0;
        void attach(CLI::App* cmd) {
            cmd->add_option("--k", k_specs, "space constant, label=value (repeatable)");
            cmd->add_option("--default-k", default_k, "constant for unlabeled factors");
            cmd->add_option("--hbar", hbar, "reduced action constant");
        }
        ensvol::VolumeContext context() const { return make_context(k_specs, default_k, hbar); }
    };

    int rc = 0;

    // ---- entropy ----------------------------------------------------------
    auto* entropy_cmd = app.add_subcommand("entropy", "entropy of an ensemble document");
    std::string entropy_input;
    bool entropy_bits = false;
    std::optional<double> entropy_alpha;
    entropy_cmd->add_option("input", entropy_input, "ensemble document (JSON)")->required();
    entropy_cmd->add_flag("--bits", entropy_bits, "report the value in bits");
    entropy_cmd->add_option("--alpha", entropy_alpha, "Renyi order (default: the alpha -> 1 entropy)");
    entropy_cmd->callback([&] {
        emitter.seed = resolve_seed(seed_flag);
        const ensvol::Ensemble e = ensvol::ensemble_from_json(load_json(entropy_input));
        const ensvol::EntropyValue s =
            entropy_alpha ? ensvol::renyi_entropy(e, *entropy_alpha) : ensvol::entropy(e);
        Json results;
        results["entropy"] = ensvol::entropy_to_json(s);
        if (entropy_alpha) results["alpha"] = *entropy_alpha;
        results["units"] = entropy_bits ? "bits" : "nats";
        results["value"] = entropy_bits ? s.bits() : s.nats;
        rc = emitter.emit(std::move(results), true);
    });

    // ---- volume -----------------------------------------------------------
    auto* volume_cmd = app.add_subcommand("volume", "V = K e^S of an ensemble document");
    std::string volume_input;
    CtxFlags volume_ctx;
    double volume_kb = 1.0;
    std::optional<double> volume_alpha;
    volume_cmd->add_option("input", volume_input, "ensemble document (JSON)")->required();
    volume_ctx.attach(volume_cmd);
    volume_cmd->add_option("--k-boltzmann", volume_kb, "Boltzmann constant for the thermodynamic reading");
    volume_cmd->add_option("--alpha", volume_alpha,
                           "Renyi order (skips the order-1 thermodynamic reading)");
    volume_cmd->callback([&] {
        emitter.seed = resolve_seed(seed_flag);
        const ensvol::Ensemble e = ensvol::ensemble_from_json(load_json(volume_input));
        const auto ctx = volume_ctx.context();
        Json results;
        if (volume_alpha) {
            results["alpha"] = *volume_alpha;
            results["volume"] = ensvol::renyi_volume(e, *volume_alpha, ctx);
        } else {
            const auto thermo = ensvol::thermodynamic_entropy(e, ctx, volume_kb);
            results = ensvol::thermodynamic_to_json(thermo);
            results["volume"] = ensvol::volume(e, ctx);
        }
        rc = emitter.emit(std::move(results), true);
    });

    // ---- chi --------------------------------------------------------------
    auto* chi_cmd = app.add_subcommand("chi", "per-signal information bound of a signal document");
    std::string chi_input;
    chi_cmd->add_option("input", chi_input, "signal document (JSON)")->required();
    chi_cmd->callback([&] {
        emitter.seed = resolve_seed(seed_flag);
        const ensvol::SignalEnsemble s = ensvol::signal_from_json(load_json(chi_input));
        const auto lr = ensvol::lanford_robinson(s);
        const auto rate = ensvol::information_rate_bound(s);
        Json results;
        results["chi"] = ensvol::entropy_to_json(rate.chi);
        results["prior_entropy"] = ensvol::entropy_to_json(ensvol::shannon_entropy(s.priors));
        results["lanford_robinson"] = ensvol::bound_to_json(lr);
        results["information_rate"] = ensvol::bound_to_json(rate.bound);
        rc = emitter.emit(std::move(results), lr.pass);
    });

    // ---- bounds -----------------------------------------------------------
    auto* bounds_cmd = app.add_subcommand("bounds", "block-coding and measurement bounds");
    std::string bounds_input, bounds_code = "iid";
    std::size_t bounds_length = 2, bounds_blocks = 8;
    double bounds_v0 = 1.0;
    CtxFlags bounds_ctx;
    bounds_cmd->add_option("input", bounds_input, "signal document (JSON)")->required();
    bounds_cmd->add_option("--length", bounds_length, "block length L")->check(CLI::PositiveNumber);
    bounds_cmd->add_option("--code", bounds_code, "block code family: iid | type | random")
        ->check(CLI::IsMember({"iid", "type", "random"}));
    bounds_cmd->add_option("--blocks", bounds_blocks, "block count for --code random");
    bounds_cmd->add_option("--v0", bounds_v0, "reference cell volume for the single-measurement bound");
    bounds_ctx.attach(bounds_cmd);
    bounds_cmd->callback([&] {
        emitter.seed = resolve_seed(seed_flag);
        const ensvol::SignalEnsemble s = ensvol::signal_from_json(load_json(bounds_input));
        const auto ctx = bounds_ctx.context();
        ensvol::BlockCode code;
        if (bounds_code == "iid") {
            code = ensvol::iid_block_code(s, bounds_length);
        } else if (bounds_code == "type") {
            code = ensvol::type_class_code(s, bounds_length);
        } else {
            ensvol::Rng rng(emitter.seed);
            code = ensvol::random_constrained_code(s, bounds_length, bounds_blocks, rng);
        }
        const auto bb = ensvol::block_volume_bounds(code, ctx);
        const auto smb = ensvol::single_measurement_bound(ensvol::mix(code.base), bounds_v0, ctx);
        const auto rate = ensvol::information_rate_bound(code.base);
        const auto lr = ensvol::lanford_robinson(code.base);
        Json results;
        results["code"] = bounds_code;
        results["block_bounds"] = ensvol::block_bounds_to_json(bb);
        results["typical_log_volume"] = ensvol::typical_log_volume(code.base, bounds_length, ctx);
        results["typical_count_log"] = ensvol::typical_count_log(code.base.priors, bounds_length);
        results["single_measurement"] = ensvol::bound_to_json(smb);
        results["information_rate"] = ensvol::bound_to_json(rate.bound);
        results["lanford_robinson"] = ensvol::bound_to_json(lr);
        rc = emitter.emit(std::move(results), bb.pass && lr.pass);
    });

    // ---- gaussian ---------------------------------------------------------
    auto* gaussian_cmd = app.add_subcommand("gaussian", "Gaussian volumes and diffusion trajectories");
    std::string gaussian_input, gaussian_process;
    double gaussian_dt = 0.01;
    std::size_t gaussian_steps = 100;
    CtxFlags gaussian_ctx;
    gaussian_cmd->add_option("input", gaussian_input, "gaussian document (JSON)")->required();
    gaussian_cmd->add_option("--process", gaussian_process, "drift/diffusion document (JSON)");
    gaussian_cmd->add_option("--dt", gaussian_dt, "integrator step");
    gaussian_cmd->add_option("--steps", gaussian_steps, "integrator step count");
    gaussian_ctx.attach(gaussian_cmd);
    gaussian_cmd->callback([&] {
        emitter.seed = resolve_seed(seed_flag);
        const ensvol::Ensemble e = ensvol::ensemble_from_json(load_json(gaussian_input));
        const auto* g = std::get_if<ensvol::GaussianEnsemble>(&e);
        if (!g)
            throw ensvol::ValidationError("gaussian: input document must have kind 'gaussian'");
        const auto ctx = gaussian_ctx.context();
        Json results;
        results["entropy"] = ensvol::entropy_to_json(ensvol::gaussian_entropy(*g));
        results["volume"] = ensvol::volume(e, ctx);
        bool pass = true;
        if (!gaussian_process.empty()) {
            const auto process = ensvol::ou_process_from_json(load_json(gaussian_process));
            const auto traj = ensvol::ou_evolve(*g, process, gaussian_dt, gaussian_steps);
            const auto rep = ensvol::volume_trajectory(traj, ctx, &process);
            results["trajectory"] = ensvol::trajectory_report_to_json(rep);
            pass = rep.pass;
        }
        rc = emitter.emit(std::move(results), pass);
    });

    // ---- uncertainty ------------------------------------------------------
    auto* unc_cmd = app.add_subcommand("uncertainty", "position/momentum entropies and their floors");
    std::string unc_input;
    double unc_sigma = 1.0, unc_spacing = 0.05, unc_hbar = 1.0, unc_separation = 0.0;
    std::size_t unc_grid = 1024;
    unc_cmd->add_option("input", unc_input, "wavefunction document (JSON); omit to synthesize a packet");
    unc_cmd->add_option("--sigma", unc_sigma, "packet width of the synthesized Gaussian");
    unc_cmd->add_option("--grid", unc_grid, "grid points of the synthesized packet");
    unc_cmd->add_option("--spacing", unc_spacing, "grid spacing of the synthesized packet");
    unc_cmd->add_option("--hbar", unc_hbar, "reduced action constant");
    unc_cmd->add_option("--two-peak", unc_separation,
                        "half separation of a synthesized two-peak superposition");
    unc_cmd->callback([&] {
        emitter.seed = resolve_seed(seed_flag);
        ensvol::GridWavefunction w =
            !unc_input.empty() ? ensvol::wavefunction_from_json(load_json(unc_input))
            : unc_separation > 0.0
                ? ensvol::two_peak_packet(unc_grid, unc_spacing, unc_sigma, unc_separation, unc_hbar)
                : ensvol::gaussian_packet(unc_grid, unc_spacing, unc_sigma, unc_hbar);
        const auto [sx, sp] = ensvol::position_momentum_entropies(w);
        const auto floor = ensvol::entropic_uncertainty_check(w);
        const auto heis = ensvol::heisenberg_from_entropy(w);
        Json results;
        results["s_x"] = ensvol::entropy_to_json(sx);
        results["s_p"] = ensvol::entropy_to_json(sp);
        results["sum_nats"] = sx.nats + sp.nats;
        results["entropic_uncertainty"] = ensvol::bound_to_json(floor);
        results["heisenberg"] = ensvol::heisenberg_to_json(heis);
        rc = emitter.emit(std::move(results), floor.pass && heis.pass);
    });

    // ---- correspondence ---------------------------------------------------
    auto* corr_cmd = app.add_subcommand("correspondence",
                                        "classical/quantum thermal volume ratio vs 2*pi*hbar");
    double corr_at = 1e4, corr_hbar = 1.0, corr_omega = 1.0, corr_mass = 1.0;
    std::vector<double> corr_sweep;
    corr_cmd->add_option("--ratio-at", corr_at, "kT/(hbar omega) evaluation point");
    corr_cmd->add_option("--sweep", corr_sweep, "additional kT/(hbar omega) points (repeatable)");
    corr_cmd->add_option("--hbar", corr_hbar, "reduced action constant");
    corr_cmd->add_option("--omega", corr_omega, "oscillator angular frequency");
    corr_cmd->add_option("--mass", corr_mass, "oscillator mass (cancels in the ratio)");
    corr_cmd->callback([&] {
        emitter.seed = resolve_seed(seed_flag);
        const double limit = 2.0 * std::numbers::pi * corr_hbar;
        const double ratio = ensvol::correspondence_ratio_at(corr_at, corr_hbar, corr_omega, corr_mass);
        Json results;
        results["ratio"] = ratio;
        results["limit"] = limit;
        results["relative_error"] = std::abs(ratio - limit) / limit;
        bool monotone = true;
        if (!corr_sweep.empty()) {
            Json sweep = Json::array();
            double prev = -1.0;
            for (double r : corr_sweep) {
                const double v = ensvol::correspondence_ratio_at(r, corr_hbar, corr_omega, corr_mass);
                Json pt;
                pt["kT_over_hbar_omega"] = r;
                pt["ratio"] = v;
                sweep.push_back(std::move(pt));
                if (v < prev) monotone = false;
                prev = v;
            }
            results["sweep"] = std::move(sweep);
            results["sweep_monotone"] = monotone;
        }
        rc = emitter.emit(std::move(results), monotone && results["relative_error"].get<double>() <= 1e-3);
    });

    // ---- fuzz -------------------------------------------------------------
    auto* fuzz_cmd = app.add_subcommand("fuzz", "seeded random sweeps of the volume axioms");
    std::string fuzz_axiom_label = "ii", fuzz_kind = "quantum", fuzz_dims;
    std::size_t fuzz_trials = 1000, fuzz_grid = 101;
    double fuzz_alpha = 2.0;
    fuzz_cmd->add_option("--axiom", fuzz_axiom_label, "i | ii | iii | iv | renyi")
        ->check(CLI::IsMember({"i", "ii", "iii", "iv", "renyi"}));
    fuzz_cmd->add_option("--kind", fuzz_kind, "classical | quantum | gaussian")
        ->check(CLI::IsMember({"classical", "quantum", "gaussian"}));
    fuzz_cmd->add_option("--trials", fuzz_trials, "trial count (0 is a vacuous pass)");
    fuzz_cmd->add_option("--dims", fuzz_dims, "per-factor size: N or LO-HI (default 2-4; gaussian 1-2)");
    fuzz_cmd->add_option("--alpha", fuzz_alpha, "Renyi order for --axiom renyi");
    fuzz_cmd->add_option("--grid", fuzz_grid, "mixing-weight grid points for --axiom iv");
    fuzz_cmd->callback([&] {
        emitter.seed = resolve_seed(seed_flag);
        ensvol::FuzzConfig cfg;
        cfg.kind = fuzz_kind == "classical" ? ensvol::Kind::classical
                   : fuzz_kind == "quantum" ? ensvol::Kind::quantum
                                            : ensvol::Kind::gaussian;
        cfg.trials = fuzz_trials;
        cfg.seed = emitter.seed;
        cfg.alpha = fuzz_alpha;
        cfg.lambda_grid = fuzz_grid;
        if (fuzz_dims.empty()) {
            if (cfg.kind == ensvol::Kind::gaussian) {
                cfg.dim_lo = 1;
                cfg.dim_hi = 2;
            }
        } else {
            std::tie(cfg.dim_lo, cfg.dim_hi) = parse_dims(fuzz_dims);
        }
        const auto report = ensvol::fuzz_axiom(ensvol::axiom_from_label(fuzz_axiom_label), cfg);
        rc = emitter.emit(ensvol::axiom_report_to_json(report), report.pass);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ensvol::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ensvol::UnsupportedError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ensvol::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const Json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return rc;
}
