#pragma once

/*
 * Gaussian diffusion volumes, the quantum/classical correspondence constant,
 * and grid-wavefunction uncertainty checks.
 *
 * Phase-space conventions follow the ensemble module: coordinates
 * (x1, p1, ...), covariance 2n x 2n.  The thermal-oscillator entropies are
 * the standard closed forms: classical S = ln(2 pi e kT / omega) (the mass
 * cancels between the x and p variances), quantum S from the Bose occupancy
 * nbar = 1/(e^{hbar omega / kT} - 1).  Their volume ratio tends to
 * h = 2 pi hbar from below as kT grows, which is the numerical statement of
 * the correspondence between the two K constants.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "ensvol/bound_report.hpp"
#include "ensvol/complex_matrix.hpp"
#include "ensvol/dft.hpp"
#include "ensvol/eigen.hpp"
#include "ensvol/ensembles.hpp"
#include "ensvol/errors.hpp"
#include "ensvol/real_matrix.hpp"
#include "ensvol/volume.hpp"

namespace ensvol {

// ---------------------------------------------------------------------------
// Ornstein-Uhlenbeck evolution of Gaussian ensembles

// dSigma/dt = A Sigma + Sigma A^T + D, dmu/dt = A mu.
struct OuProcess {
    RealMatrix drift;     // A, units 1/time
    RealMatrix diffusion; // D, symmetric PSD, phase-space-units^2/time

    OuProcess() = default;
    OuProcess(RealMatrix a, RealMatrix d) : drift(std::move(a)), diffusion(std::move(d)) {
        if (!drift.square() || !diffusion.square() || drift.rows != diffusion.rows ||
            drift.rows == 0 || drift.rows % 2 != 0)
            throw ValidationError("OuProcess: drift and diffusion must be square 2n x 2n of equal size");
        const double scale = max_abs(diffusion);
        if (symmetry_defect(diffusion) > 1e-12 * std::max(scale, 1.0))
            throw ValidationError("OuProcess: diffusion matrix is not symmetric within 1e-12");
        if (scale > 0.0) {
            const auto eig = symmetric_eigenvalues(diffusion);
            if (eig.front() < -1e-12 * scale)
                throw ValidationError("OuProcess: diffusion matrix has an eigenvalue below -1e-12");
        }
    }

    std::size_t dim() const { return drift.rows; }

    bool diffusion_positive_definite() const {
        if (max_abs(diffusion) == 0.0) return false;
        return symmetric_eigenvalues(diffusion).front() > 0.0;
    }
};

struct OuTrajectory {
    std::vector<double> times;
    std::vector<GaussianEnsemble> states;
};

namespace detail {

inline RealMatrix sigma_rate(const RealMatrix& a, const RealMatrix& sigma, const RealMatrix& d) {
    return a * sigma + sigma * transpose(a) + d;
}

inline std::vector<double> axpy(const std::vector<double>& y, double h, const std::vector<double>& k) {
    std::vector<double> r = y;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += h * k[i];
    return r;
}

} // namespace detail

// Classical fixed-step RK4.  Both equations are linear, so the integrator is
// exact for constant and rotational flows up to its O(dt^5) local error; the
// covariance is re-symmetrized and re-validated at every step, and a loss of
// positive definiteness is reported with the offending step number.
inline OuTrajectory ou_evolve(const GaussianEnsemble& g, const OuProcess& p, double dt,
                              std::size_t steps) {
    if (p.dim() != 2 * g.dof)
        throw ValidationError("ou_evolve: process dimension does not match the ensemble");
    if (dt <= 0.0)
        throw ValidationError("ou_evolve: step size must be positive");
    OuTrajectory traj;
    traj.times.reserve(steps + 1);
    traj.states.reserve(steps + 1);
    traj.times.push_back(0.0);
    traj.states.push_back(g);
    RealMatrix sigma = g.covariance;
    std::vector<double> mu = g.mean;
    const RealMatrix& a = p.drift;
    const RealMatrix& d = p.diffusion;
    for (std::size_t step = 1; step <= steps; ++step) {
        const RealMatrix s1 = detail::sigma_rate(a, sigma, d);
        const RealMatrix s2 = detail::sigma_rate(a, sigma + (dt / 2.0) * s1, d);
        const RealMatrix s3 = detail::sigma_rate(a, sigma + (dt / 2.0) * s2, d);
        const RealMatrix s4 = detail::sigma_rate(a, sigma + dt * s3, d);
        sigma = symmetrized(sigma + (dt / 6.0) * (s1 + 2.0 * s2 + 2.0 * s3 + s4));

        const std::vector<double> m1 = a * mu;
        const std::vector<double> m2 = a * detail::axpy(mu, dt / 2.0, m1);
        const std::vector<double> m3 = a * detail::axpy(mu, dt / 2.0, m2);
        const std::vector<double> m4 = a * detail::axpy(mu, dt, m3);
        for (std::size_t i = 0; i < mu.size(); ++i)
            mu[i] += (dt / 6.0) * (m1[i] + 2.0 * m2[i] + 2.0 * m3[i] + m4[i]);

        try {
            traj.states.emplace_back(g.dof, mu, sigma, g.labels);
        } catch (const ValidationError&) {
            throw NumericalError("ou_evolve: covariance lost positive definiteness at step " +
                                 std::to_string(step) + " (step size too large)");
        }
        traj.times.push_back(static_cast<double>(step) * dt);
    }
    return traj;
}

struct VolumePoint {
    double time = 0.0;
    double volume = 0.0;
    double log_volume = 0.0;
};

struct TrajectoryReport {
    std::vector<VolumePoint> points;
    double min_increment = 0.0;       // smallest consecutive volume difference
    double max_drift = 0.0;           // largest |V(t) - V(0)|
    bool monotone_required = false;   // set when the diffusion matrix is positive definite
    bool strictly_increasing = false; // every increment above 1e-12
    bool pass = true;
};

// Volumes along a trajectory.  When the generating process is supplied and
// its diffusion is positive definite, strict per-step growth is required;
// otherwise monotonicity is reported but not demanded (damped drifts can
// legitimately shrink the ellipsoid).
inline TrajectoryReport volume_trajectory(const OuTrajectory& traj, const VolumeContext& ctx = {},
                                          const OuProcess* process = nullptr) {
    if (traj.states.empty() || traj.states.size() != traj.times.size())
        throw ValidationError("volume_trajectory: malformed trajectory");
    TrajectoryReport r;
    r.points.reserve(traj.states.size());
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        const double lv = log_volume(traj.states[i], ctx);
        r.points.push_back({traj.times[i], std::exp(lv), lv});
    }
    r.min_increment = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < r.points.size(); ++i) {
        r.min_increment = std::min(r.min_increment, r.points[i].volume - r.points[i - 1].volume);
        r.max_drift = std::max(r.max_drift, std::abs(r.points[i].volume - r.points[0].volume));
    }
    if (r.points.size() < 2) r.min_increment = 0.0;
    r.strictly_increasing = r.points.size() >= 2 && r.min_increment > 1e-12;
    r.monotone_required = process != nullptr && process->diffusion_positive_definite();
    r.pass = !r.monotone_required || r.strictly_increasing;
    return r;
}

// ---------------------------------------------------------------------------
// Thermal oscillator correspondence

struct ThermalOscillator {
    double omega = 1.0;
    double mass = 1.0;
    double kT = 1.0;
    double hbar = 1.0;

    ThermalOscillator() = default;
    ThermalOscillator(double omega_, double mass_, double kT_, double hbar_)
        : omega(omega_), mass(mass_), kT(kT_), hbar(hbar_) {
        if (omega <= 0.0 || mass <= 0.0 || kT <= 0.0 || hbar <= 0.0)
            throw ValidationError("ThermalOscillator: all parameters must be positive");
    }
};

// Equipartition Gaussian: Dx^2 = kT/(m omega^2), Dp^2 = m kT, so
// Dx Dp = kT/omega independent of mass.
inline double classical_thermal_entropy(const ThermalOscillator& osc) {
    return std::log(2.0 * std::numbers::pi * std::numbers::e * osc.kT / osc.omega);
}

// Bose occupancy entropy (nbar+1) ln(nbar+1) - nbar ln nbar, regrouped as
// nbar ln(1 + 1/nbar) + ln(1 + nbar): at large occupancy the textbook form
// subtracts two O(nbar ln nbar) terms and loses ~nbar*eps absolutely, which
// the grouped form avoids.
inline double quantum_thermal_entropy(const ThermalOscillator& osc) {
    const double nbar = 1.0 / std::expm1(osc.hbar * osc.omega / osc.kT);
    return nbar * std::log1p(1.0 / nbar) + std::log1p(nbar);
}

// e^{S_C} / e^{S_Q}: the classical-to-quantum volume ratio of one thermal
// degree of freedom.  Tends to 2 pi hbar from below as kT/(hbar omega)
// grows; equating the two volumes in that limit fixes the quantum space
// constant at h^n times the classical one.
inline double correspondence_ratio(const ThermalOscillator& osc) {
    return std::exp(classical_thermal_entropy(osc) - quantum_thermal_entropy(osc));
}

// Ratio evaluated at kT = r * hbar * omega (a pure-number temperature knob).
inline double correspondence_ratio_at(double kT_over_hbar_omega, double hbar = 1.0,
                                      double omega = 1.0, double mass = 1.0) {
    if (kT_over_hbar_omega <= 0.0)
        throw ValidationError("correspondence_ratio_at: temperature ratio must be positive");
    return correspondence_ratio(
        ThermalOscillator(omega, mass, kT_over_hbar_omega * hbar * omega, hbar));
}

// ---------------------------------------------------------------------------
// Grid wavefunctions and uncertainty checks

struct GridWavefunction {
    std::vector<Complex> samples; // psi on x_j = j * spacing
    double spacing = 1.0;
    double hbar = 1.0;

    GridWavefunction() = default;
    GridWavefunction(std::vector<Complex> s, double spacing_, double hbar_)
        : samples(std::move(s)), spacing(spacing_), hbar(hbar_) {
        if (samples.empty())
            throw ValidationError("GridWavefunction: empty sample list");
        if (spacing <= 0.0 || hbar <= 0.0)
            throw ValidationError("GridWavefunction: spacing and hbar must be positive");
        double norm = 0.0;
        for (const auto& a : samples) norm += std::norm(a);
        norm *= spacing;
        if (std::abs(norm - 1.0) > 1e-8)
            throw ValidationError("GridWavefunction: norm differs from 1 by more than 1e-8");
    }

    std::size_t size() const { return samples.size(); }
};

// Normalized Gaussian packet centered on the grid midpoint; sigma is the
// position standard deviation.  Normalization is discrete, so the norm
// invariant holds exactly regardless of boundary truncation.
inline GridWavefunction gaussian_packet(std::size_t n, double spacing, double sigma,
                                        double hbar = 1.0, double center_offset = 0.0) {
    if (n < 2)
        throw ValidationError("gaussian_packet: at least two grid points required");
    if (sigma <= 0.0)
        throw ValidationError("gaussian_packet: width must be positive");
    std::vector<Complex> psi(n);
    const double x0 = 0.5 * static_cast<double>(n - 1) * spacing + center_offset;
    double norm = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double x = static_cast<double>(j) * spacing - x0;
        const double amp = std::exp(-x * x / (4.0 * sigma * sigma));
        psi[j] = amp;
        norm += amp * amp;
    }
    norm = std::sqrt(norm * spacing);
    for (auto& a : psi) a /= norm;
    return GridWavefunction(std::move(psi), spacing, hbar);
}

// Equal superposition of two packets with centers separated by 2*separation;
// exercises the delocalized regime of the uncertainty checks.
inline GridWavefunction two_peak_packet(std::size_t n, double spacing, double sigma,
                                        double separation, double hbar = 1.0) {
    if (n < 2 || sigma <= 0.0 || separation <= 0.0)
        throw ValidationError("two_peak_packet: invalid grid or shape parameters");
    std::vector<Complex> psi(n);
    const double x0 = 0.5 * static_cast<double>(n - 1) * spacing;
    double norm = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double x = static_cast<double>(j) * spacing - x0;
        const double l = x + separation, r = x - separation;
        const double amp = std::exp(-l * l / (4.0 * sigma * sigma)) +
                           std::exp(-r * r / (4.0 * sigma * sigma));
        psi[j] = amp;
        norm += amp * amp;
    }
    norm = std::sqrt(norm * spacing);
    for (auto& a : psi) a /= norm;
    return GridWavefunction(std::move(psi), spacing, hbar);
}

namespace detail {

inline void require_contained(const GridWavefunction& w) {
    double peak = 0.0;
    for (const auto& a : w.samples) peak = std::max(peak, std::abs(a));
    const double edge = std::max(std::abs(w.samples.front()), std::abs(w.samples.back()));
    if (edge > 1e-6 * peak)
        throw ValidationError(
            "grid wavefunction leaks past the boundary (edge amplitude above 1e-6 of peak); "
            "enlarge the grid");
}

// Momentum-space density |phi(p_k)|^2 on p_k = k_centered * 2 pi hbar / (N a).
// phi is the continuum Fourier transform approximated by the unitary DFT:
// phi(p_k) = a sqrt(N / (2 pi hbar)) * F_k.
struct MomentumDensity {
    std::vector<double> density;
    std::vector<double> momenta;
    double dp = 0.0;
};

inline MomentumDensity momentum_density(const GridWavefunction& w) {
    const std::size_t n = w.size();
    const auto f = dft(w.samples, -1);
    MomentumDensity m;
    m.dp = 2.0 * std::numbers::pi * w.hbar / (static_cast<double>(n) * w.spacing);
    m.density.resize(n);
    m.momenta.resize(n);
    const double scale = w.spacing * w.spacing * static_cast<double>(n) /
                         (2.0 * std::numbers::pi * w.hbar);
    for (std::size_t k = 0; k < n; ++k) {
        m.density[k] = scale * std::norm(f[k]);
        // Frequencies above the midpoint are negative momenta.
        const double kc = k < (n + 1) / 2 ? static_cast<double>(k)
                                          : static_cast<double>(k) - static_cast<double>(n);
        m.momenta[k] = kc * m.dp;
    }
    return m;
}

inline double riemann_entropy(const std::vector<double>& density, double cell) {
    double s = 0.0;
    for (double rho : density)
        if (rho > 0.0) s -= cell * rho * std::log(rho);
    return s;
}

} // namespace detail

// Differential entropies of |psi(x)|^2 and |phi(p)|^2 by Riemann sum.
inline std::pair<EntropyValue, EntropyValue> position_momentum_entropies(const GridWavefunction& w) {
    detail::require_contained(w);
    std::vector<double> rho_x(w.size());
    for (std::size_t j = 0; j < w.size(); ++j) rho_x[j] = std::norm(w.samples[j]);
    const auto mom = detail::momentum_density(w);
    return {detail::riemann_entropy(rho_x, w.spacing),
            detail::riemann_entropy(mom.density, mom.dp)};
}

struct MomentReport {
    double mean_x = 0.0, delta_x = 0.0;
    double mean_p = 0.0, delta_p = 0.0;
};

inline MomentReport position_momentum_moments(const GridWavefunction& w) {
    detail::require_contained(w);
    MomentReport r;
    double ex = 0.0, exx = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) {
        const double x = static_cast<double>(j) * w.spacing;
        const double q = std::norm(w.samples[j]) * w.spacing;
        ex += q * x;
        exx += q * x * x;
    }
    r.mean_x = ex;
    r.delta_x = std::sqrt(std::max(0.0, exx - ex * ex));
    const auto mom = detail::momentum_density(w);
    double ep = 0.0, epp = 0.0;
    for (std::size_t k = 0; k < mom.density.size(); ++k) {
        const double q = mom.density[k] * mom.dp;
        ep += q * mom.momenta[k];
        epp += q * mom.momenta[k] * mom.momenta[k];
    }
    r.mean_p = ep;
    r.delta_p = std::sqrt(std::max(0.0, epp - ep * ep));
    return r;
}

// S_X + S_P against its semiclassical floor ln(2 pi hbar).  The relation is
// approximate in general, so the tolerance is loose (1e-3) and failures
// show up as negative slack rather than exceptions.
inline BoundReport entropic_uncertainty_check(const GridWavefunction& w) {
    const auto [sx, sp] = position_momentum_entropies(w);
    return BoundReport::make("entropic_uncertainty", std::log(2.0 * std::numbers::pi * w.hbar),
                             sx.nats + sp.nats, "nats", 1e-3);
}

// Moment product Dx Dp against hbar/e, plus the entropy-implied lower bound
// e^{S_X + S_P} / (2 pi e) <= Dx Dp that links the two uncertainty forms
// (a maximum-entropy Gaussian argument applied to each marginal).
struct HeisenbergReport {
    double delta_x = 0.0;
    double delta_p = 0.0;
    double moment_product = 0.0;
    double entropy_bound = 0.0; // e^{S_X + S_P} / (2 pi e)
    double floor = 0.0;         // hbar / e
    BoundReport product_floor;  // floor <= moment_product
    BoundReport entropy_chain;  // entropy_bound <= moment_product
    bool pass = true;
};

inline HeisenbergReport heisenberg_from_entropy(const GridWavefunction& w) {
    HeisenbergReport r;
    const auto m = position_momentum_moments(w);
    const auto [sx, sp] = position_momentum_entropies(w);
    r.delta_x = m.delta_x;
    r.delta_p = m.delta_p;
    r.moment_product = m.delta_x * m.delta_p;
    r.entropy_bound = std::exp(sx.nats + sp.nats) / (2.0 * std::numbers::pi * std::numbers::e);
    r.floor = w.hbar / std::numbers::e;
    r.product_floor = BoundReport::make("moment_product_floor", r.floor, r.moment_product,
                                        "action", 1e-3 * w.hbar);
    r.entropy_chain = BoundReport::make("entropy_chain", r.entropy_bound, r.moment_product,
                                        "action", 1e-6 * w.hbar);
    r.pass = r.product_floor.pass && r.entropy_chain.pass;
    return r;
}

// ---------------------------------------------------------------------------
// Determinant inequalities for covariance matrices

// det Sigma <= prod of diagonal entries, the rigorous kernel behind the
// marginal-volume inequality for Gaussian ensembles.
inline BoundReport hadamard_check(const RealMatrix& cov) {
    if (!cov.square() || cov.rows == 0)
        throw ValidationError("hadamard_check: covariance must be square and nonempty");
    const double scale = max_abs(cov);
    if (symmetry_defect(cov) > 1e-12 * std::max(scale, 1.0))
        throw ValidationError("hadamard_check: covariance is not symmetric within 1e-12");
    const auto eig = symmetric_eigenvalues(cov);
    if (eig.front() <= 0.0)
        throw ValidationError("hadamard_check: covariance is not positive definite");
    double det = 1.0, diag = 1.0;
    for (double lam : eig) det *= lam;
    for (std::size_t i = 0; i < cov.rows; ++i) diag *= cov(i, i);
    return BoundReport::make("hadamard", det, diag, "determinant",
                             1e-12 * std::max(1.0, std::abs(diag)));
}

} // namespace ensvol
