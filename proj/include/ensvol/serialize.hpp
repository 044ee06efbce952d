#pragma once

/*
 * JSON serialization for ensemble documents and reports.
 *
 * Conventions: every document carries a "kind" tag (classical | quantum |
 * gaussian | signal | wavefunction); complex numbers are [re, im] arrays,
 * matrices are arrays of rows.  Parsing funnels through the same validating
 * constructors as in-memory construction, so a file that loads is a file
 * that validates.  nlohmann::json keeps object keys sorted and prints
 * doubles with shortest round-trip precision, which is what makes report
 * payloads byte-stable across reruns.
 */

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "ensvol/axioms.hpp"
#include "ensvol/bound_report.hpp"
#include "ensvol/complex_matrix.hpp"
#include "ensvol/ensembles.hpp"
#include "ensvol/errors.hpp"
#include "ensvol/information.hpp"
#include "ensvol/real_matrix.hpp"
#include "ensvol/semiclassical.hpp"
#include "ensvol/volume.hpp"

namespace ensvol {

using Json = nlohmann::json;

namespace detail {

inline const Json& require_field(const Json& j, const char* field, const char* what) {
    if (!j.contains(field))
        throw ValidationError(std::string(what) + ": missing field '" + field + "'");
    return j.at(field);
}

} // namespace detail

// ---------------------------------------------------------------------------
// Matrices and complex numbers

inline Json complex_to_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ValidationError("complex number: expected a [re, im] array");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline Json complex_matrix_to_json(const ComplexMatrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows; ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols; ++j) row.push_back(complex_to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline ComplexMatrix complex_matrix_from_json(const Json& j) {
    if (!j.is_array() || j.empty())
        throw ValidationError("complex matrix: expected a nonempty array of rows");
    const std::size_t rows = j.size();
    const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
    if (cols == 0)
        throw ValidationError("complex matrix: rows must be nonempty arrays");
    ComplexMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols)
            throw ValidationError("complex matrix: ragged rows");
        for (std::size_t k = 0; k < cols; ++k) m(i, k) = complex_from_json(j[i][k]);
    }
    return m;
}

inline Json real_matrix_to_json(const RealMatrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows; ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols; ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline RealMatrix real_matrix_from_json(const Json& j) {
    if (!j.is_array() || j.empty())
        throw ValidationError("real matrix: expected a nonempty array of rows");
    const std::size_t rows = j.size();
    const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
    if (cols == 0)
        throw ValidationError("real matrix: rows must be nonempty arrays");
    RealMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols)
            throw ValidationError("real matrix: ragged rows");
        for (std::size_t k = 0; k < cols; ++k) {
            if (!j[i][k].is_number())
                throw ValidationError("real matrix: entries must be numbers");
            m(i, k) = j[i][k].get<double>();
        }
    }
    return m;
}

// ---------------------------------------------------------------------------
// Ensemble documents

inline Json ensemble_to_json(const Ensemble& e) {
    Json j;
    if (const auto* c = std::get_if<ClassicalDistribution>(&e)) {
        j["kind"] = "classical";
        j["axes"] = c->axes;
        j["probabilities"] = c->probabilities;
        if (!c->labels.empty()) j["labels"] = c->labels;
        return j;
    }
    if (const auto* q = std::get_if<DensityOperator>(&e)) {
        j["kind"] = "quantum";
        j["factor_dims"] = q->factor_dims;
        j["matrix"] = complex_matrix_to_json(q->matrix);
        if (!q->labels.empty()) j["labels"] = q->labels;
        return j;
    }
    const auto& g = std::get<GaussianEnsemble>(e);
    j["kind"] = "gaussian";
    j["dof"] = g.dof;
    j["mean"] = g.mean;
    j["covariance"] = real_matrix_to_json(g.covariance);
    if (!g.labels.empty()) j["labels"] = g.labels;
    return j;
}

inline std::vector<std::string> labels_from_json(const Json& j) {
    if (!j.contains("labels")) return {};
    return j.at("labels").get<std::vector<std::string>>();
}

inline Ensemble ensemble_from_json(const Json& j) {
    const std::string kind = detail::require_field(j, "kind", "ensemble document").get<std::string>();
    if (kind == "classical") {
        return ClassicalDistribution(
            detail::require_field(j, "axes", "classical document").get<std::vector<std::size_t>>(),
            detail::require_field(j, "probabilities", "classical document").get<std::vector<double>>(),
            labels_from_json(j));
    }
    if (kind == "quantum") {
        return DensityOperator(
            detail::require_field(j, "factor_dims", "quantum document").get<std::vector<std::size_t>>(),
            complex_matrix_from_json(detail::require_field(j, "matrix", "quantum document")),
            labels_from_json(j));
    }
    if (kind == "gaussian") {
        return GaussianEnsemble(
            detail::require_field(j, "dof", "gaussian document").get<std::size_t>(),
            detail::require_field(j, "mean", "gaussian document").get<std::vector<double>>(),
            real_matrix_from_json(detail::require_field(j, "covariance", "gaussian document")),
            labels_from_json(j));
    }
    throw ValidationError("ensemble document: unknown kind '" + kind +
                          "' (expected classical|quantum|gaussian)");
}

inline Json signal_to_json(const SignalEnsemble& s) {
    Json j;
    j["kind"] = "signal";
    Json states = Json::array();
    for (const auto& st : s.states) states.push_back(ensemble_to_json(st));
    j["states"] = std::move(states);
    j["priors"] = s.priors;
    return j;
}

inline SignalEnsemble signal_from_json(const Json& j) {
    const std::string kind = detail::require_field(j, "kind", "signal document").get<std::string>();
    if (kind != "signal")
        throw ValidationError("signal document: kind must be 'signal'");
    const Json& states_json = detail::require_field(j, "states", "signal document");
    if (!states_json.is_array() || states_json.empty())
        throw ValidationError("signal document: 'states' must be a nonempty array");
    std::vector<Ensemble> states;
    states.reserve(states_json.size());
    for (const auto& st : states_json) states.push_back(ensemble_from_json(st));
    return SignalEnsemble(std::move(states),
                          detail::require_field(j, "priors", "signal document").get<std::vector<double>>());
}

inline Json wavefunction_to_json(const GridWavefunction& w) {
    Json j;
    j["kind"] = "wavefunction";
    Json samples = Json::array();
    for (const auto& a : w.samples) samples.push_back(complex_to_json(a));
    j["samples"] = std::move(samples);
    j["spacing"] = w.spacing;
    j["hbar"] = w.hbar;
    return j;
}

inline GridWavefunction wavefunction_from_json(const Json& j) {
    const std::string kind = detail::require_field(j, "kind", "wavefunction document").get<std::string>();
    if (kind != "wavefunction")
        throw ValidationError("wavefunction document: kind must be 'wavefunction'");
    const Json& samples_json = detail::require_field(j, "samples", "wavefunction document");
    if (!samples_json.is_array() || samples_json.empty())
        throw ValidationError("wavefunction document: 'samples' must be a nonempty array");
    std::vector<Complex> samples;
    samples.reserve(samples_json.size());
    for (const auto& s : samples_json) samples.push_back(complex_from_json(s));
    return GridWavefunction(std::move(samples),
                            detail::require_field(j, "spacing", "wavefunction document").get<double>(),
                            detail::require_field(j, "hbar", "wavefunction document").get<double>());
}

inline Json ou_process_to_json(const OuProcess& p) {
    Json j;
    j["drift"] = real_matrix_to_json(p.drift);
    j["diffusion"] = real_matrix_to_json(p.diffusion);
    return j;
}

inline OuProcess ou_process_from_json(const Json& j) {
    return OuProcess(real_matrix_from_json(detail::require_field(j, "drift", "process document")),
                     real_matrix_from_json(detail::require_field(j, "diffusion", "process document")));
}

// ---------------------------------------------------------------------------
// Reports

inline Json entropy_to_json(const EntropyValue& s) {
    Json j;
    j["nats"] = s.nats;
    j["bits"] = s.bits();
    return j;
}

inline Json bound_to_json(const BoundReport& b) {
    Json j;
    j["name"] = b.name;
    j["lhs"] = b.lhs;
    j["rhs"] = b.rhs;
    j["slack"] = b.slack;
    j["units"] = b.units;
    j["pass"] = b.pass;
    if (!b.warning.empty()) j["warning"] = b.warning;
    return j;
}

inline Json witness_to_json(const AxiomWitness& w) {
    Json j;
    Json inputs = Json::array();
    for (const auto& e : w.inputs) inputs.push_back(ensemble_to_json(e));
    j["inputs"] = std::move(inputs);
    if (w.unitary) j["unitary"] = complex_matrix_to_json(*w.unitary);
    if (w.permutation) j["permutation"] = *w.permutation;
    if (w.symplectic) j["symplectic"] = real_matrix_to_json(*w.symplectic);
    if (w.lambda) j["lambda"] = *w.lambda;
    if (w.alpha) j["alpha"] = *w.alpha;
    return j;
}

inline AxiomWitness witness_from_json(const Json& j) {
    AxiomWitness w;
    const Json& inputs = detail::require_field(j, "inputs", "axiom witness");
    for (const auto& e : inputs) w.inputs.push_back(ensemble_from_json(e));
    if (j.contains("unitary")) w.unitary = complex_matrix_from_json(j.at("unitary"));
    if (j.contains("permutation")) w.permutation = j.at("permutation").get<std::vector<std::size_t>>();
    if (j.contains("symplectic")) w.symplectic = real_matrix_from_json(j.at("symplectic"));
    if (j.contains("lambda")) w.lambda = j.at("lambda").get<double>();
    if (j.contains("alpha")) w.alpha = j.at("alpha").get<double>();
    return w;
}

inline Json axiom_report_to_json(const AxiomReport& r) {
    Json j;
    j["axiom"] = axiom_label(r.axiom);
    j["trials"] = r.trials;
    j["worst_violation"] = r.worst_violation;
    j["tolerance"] = r.tolerance;
    j["pass"] = r.pass;
    j["seed"] = r.seed;
    if (r.witness) j["witness"] = witness_to_json(*r.witness);
    return j;
}

inline Json block_bounds_to_json(const BlockBoundsReport& r) {
    Json j;
    j["length"] = r.length;
    j["log_volume_block"] = r.log_volume_block;
    j["log_volume_slots"] = r.log_volume_slots;
    j["log_volume_power"] = r.log_volume_power;
    j["block_projection"] = bound_to_json(r.block_projection);
    j["slot_power"] = bound_to_json(r.slot_power);
    j["concavity"] = bound_to_json(r.concavity);
    j["pass"] = r.pass;
    return j;
}

inline Json thermodynamic_to_json(const ThermodynamicReport& r) {
    Json j;
    j["entropy_nats"] = r.entropy_nats;
    j["log_k"] = r.log_k;
    j["log_volume"] = r.log_volume;
    j["microstate_count"] = r.microstate_count;
    j["k_boltzmann"] = r.k_boltzmann;
    j["thermodynamic"] = r.thermodynamic;
    return j;
}

inline Json trajectory_report_to_json(const TrajectoryReport& r) {
    Json j;
    Json pts = Json::array();
    for (const auto& p : r.points) {
        Json pt;
        pt["time"] = p.time;
        pt["volume"] = p.volume;
        pt["log_volume"] = p.log_volume;
        pts.push_back(std::move(pt));
    }
    j["points"] = std::move(pts);
    j["min_increment"] = r.min_increment;
    j["max_drift"] = r.max_drift;
    j["monotone_required"] = r.monotone_required;
    j["strictly_increasing"] = r.strictly_increasing;
    j["pass"] = r.pass;
    return j;
}

inline Json heisenberg_to_json(const HeisenbergReport& r) {
    Json j;
    j["delta_x"] = r.delta_x;
    j["delta_p"] = r.delta_p;
    j["moment_product"] = r.moment_product;
    j["entropy_bound"] = r.entropy_bound;
    j["floor"] = r.floor;
    j["product_floor"] = bound_to_json(r.product_floor);
    j["entropy_chain"] = bound_to_json(r.entropy_chain);
    j["pass"] = r.pass;
    return j;
}

} // namespace ensvol
