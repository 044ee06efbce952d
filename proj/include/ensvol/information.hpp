#pragma once

/*
 * Communication-context bounds: the chi quantity S(mix) - sum p_i S(rho_i),
 * single-measurement capacity, block-signal ensembles under a per-slot
 * frequency constraint, typical-set volumes, and the chi <= H(priors)
 * inequality.
 *
 * Every multiplicative chain (block volumes, typical volumes) is computed in
 * log-space; V^L overflows double long before L gets interesting otherwise.
 * Bound reports always state the claim lhs <= rhs, so slack = rhs - lhs is
 * nonnegative exactly when the inequality holds.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "ensvol/bound_report.hpp"
#include "ensvol/ensembles.hpp"
#include "ensvol/errors.hpp"
#include "ensvol/rng.hpp"
#include "ensvol/volume.hpp"

namespace ensvol {

// ---------------------------------------------------------------------------
// Per-signal bounds

// S(mix) - sum p_i S(rho_i), in nats.  Nonnegative up to roundoff by
// concavity of the entropy.
inline EntropyValue holevo_chi(const SignalEnsemble& s) {
    double avg = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) avg += s.priors[i] * entropy(s.states[i]);
    return entropy(mix(s)) - avg;
}

// Capacity ceiling log2(V / v0) bits for one measurement against a reference
// cell of volume v0.  lhs is the caller's achieved information (unknown
// here, reported as 0); a volume below v0 clips to zero capacity rather
// than reporting a negative bound.
inline BoundReport single_measurement_bound(const Ensemble& e, double v0,
                                            const VolumeContext& ctx = {}) {
    if (v0 <= 0.0)
        throw ValidationError("single_measurement_bound: reference volume must be positive");
    const double log_ratio = log_volume(e, ctx) - std::log(v0);
    BoundReport r = BoundReport::make("single_measurement", 0.0,
                                      std::max(0.0, log_ratio * nats_to_bits), "bits", 0.0);
    if (log_ratio < 0.0)
        r.warning = "ensemble volume below the reference cell; capacity clipped to zero";
    return r;
}

// chi <= H(priors).
inline BoundReport lanford_robinson(const SignalEnsemble& s) {
    return BoundReport::make("lanford_robinson", holevo_chi(s), shannon_entropy(s.priors), "nats",
                             1e-9);
}

struct InformationRateReport {
    EntropyValue chi;  // per-signal ceiling in nats
    BoundReport bound; // the same ceiling in bits; lhs is the caller's rate (0 here)
};

// Asymptotic per-signal information ceiling chi * log2(e) bits; the finite-L
// convergence gap is visible through block_volume_bounds.
inline InformationRateReport information_rate_bound(const SignalEnsemble& s) {
    InformationRateReport r;
    r.chi = holevo_chi(s);
    r.bound = BoundReport::make("information_rate", 0.0, r.chi.bits(), "bits", 0.0);
    return r;
}

// ---------------------------------------------------------------------------
// Block codes

// Length-L blocks over a signal alphabet.  The defining constraint: averaged
// over blocks, each signal i still occupies a fraction p_i of the slots.
struct BlockCode {
    SignalEnsemble base;
    std::size_t length = 0;
    std::vector<std::vector<std::size_t>> blocks; // indices into base.states
    std::vector<double> block_priors;

    BlockCode() = default;
    BlockCode(SignalEnsemble b, std::size_t L, std::vector<std::vector<std::size_t>> blk,
              std::vector<double> priors)
        : base(std::move(b)), length(L), blocks(std::move(blk)), block_priors(std::move(priors)) {
        if (length == 0)
            throw ValidationError("BlockCode: block length must be at least 1");
        if (blocks.empty())
            throw ValidationError("BlockCode: block list is empty");
        if (block_priors.size() != blocks.size())
            throw ValidationError("BlockCode: prior count does not match block count");
        for (const auto& blk_ : blocks) {
            if (blk_.size() != length)
                throw ValidationError("BlockCode: every block must have the declared length");
            for (std::size_t idx : blk_)
                if (idx >= base.size())
                    throw ValidationError("BlockCode: block index out of range");
        }
        detail::clip_and_check_probabilities(block_priors, "BlockCode priors");
        const auto freq = slot_averaged_frequencies();
        for (std::size_t i = 0; i < base.size(); ++i)
            if (std::abs(freq[i] - base.priors[i]) > 1e-9)
                throw ValidationError(
                    "BlockCode: slot-averaged frequency of signal " + std::to_string(i) +
                    " deviates from its prior by more than 1e-9");
    }

    // freq[i] = sum over blocks of prior * (occurrences of i) / L.
    std::vector<double> slot_averaged_frequencies() const {
        std::vector<double> freq(base.size(), 0.0);
        for (std::size_t b = 0; b < blocks.size(); ++b)
            for (std::size_t idx : blocks[b])
                freq[idx] += block_priors[b] / static_cast<double>(length);
        return freq;
    }
};

// All |alphabet|^L blocks with product priors.  Satisfies the frequency
// constraint identically and makes the block-volume chain tight.
inline BlockCode iid_block_code(const SignalEnsemble& base, std::size_t L) {
    if (L == 0)
        throw ValidationError("iid_block_code: block length must be at least 1");
    const std::size_t m = base.size();
    double total = 1.0;
    for (std::size_t l = 0; l < L; ++l) {
        total *= static_cast<double>(m);
        if (total > 1e5)
            throw ValidationError("iid_block_code: alphabet^length exceeds the enumeration cap of 1e5");
    }
    std::vector<std::vector<std::size_t>> blocks;
    std::vector<double> priors;
    std::vector<std::size_t> odo(L, 0);
    while (true) {
        double p = 1.0;
        for (std::size_t idx : odo) p *= base.priors[idx];
        blocks.push_back(odo);
        priors.push_back(p);
        std::size_t l = L;
        while (l-- > 0) {
            if (++odo[l] < m) break;
            odo[l] = 0;
            if (l == 0) return BlockCode(base, L, std::move(blocks), std::move(priors));
        }
    }
}

// All blocks whose empirical type matches the priors exactly (requires
// p_i = k_i / L), with uniform priors.  These are the typical blocks in the
// strictest sense: every block realizes the frequencies, not just the mean.
inline BlockCode type_class_code(const SignalEnsemble& base, std::size_t L) {
    if (L == 0)
        throw ValidationError("type_class_code: block length must be at least 1");
    std::vector<std::size_t> counts(base.size());
    std::size_t total = 0;
    for (std::size_t i = 0; i < base.size(); ++i) {
        const double k = base.priors[i] * static_cast<double>(L);
        counts[i] = static_cast<std::size_t>(std::llround(k));
        if (std::abs(k - static_cast<double>(counts[i])) > 1e-9)
            throw ValidationError("type_class_code: priors must be integer multiples of 1/L");
        total += counts[i];
    }
    if (total != L)
        throw ValidationError("type_class_code: prior counts do not fill the block length");
    std::vector<std::size_t> pattern;
    for (std::size_t i = 0; i < counts.size(); ++i)
        pattern.insert(pattern.end(), counts[i], i);
    std::vector<std::vector<std::size_t>> blocks;
    do {
        blocks.push_back(pattern);
        if (blocks.size() > 100000)
            throw ValidationError("type_class_code: type class exceeds the enumeration cap of 1e5");
    } while (std::next_permutation(pattern.begin(), pattern.end()));
    const std::vector<double> priors(blocks.size(), 1.0 / static_cast<double>(blocks.size()));
    return BlockCode(base, L, std::move(blocks), priors);
}

// Random code honoring the constraint by construction: blocks and priors are
// drawn freely, then the base priors are re-derived as the realized
// slot-averaged frequencies.  Gives exact-constraint codes of any size
// without rejection loops.
inline BlockCode random_constrained_code(const SignalEnsemble& base, std::size_t L,
                                         std::size_t block_count, Rng& rng) {
    if (L == 0 || block_count == 0)
        throw ValidationError("random_constrained_code: length and block count must be positive");
    std::vector<std::vector<std::size_t>> blocks(block_count, std::vector<std::size_t>(L));
    for (auto& blk : blocks)
        for (auto& idx : blk) idx = rng.uniform_int(0, base.size() - 1);
    std::vector<double> priors = random_simplex(block_count, rng);
    std::vector<double> freq(base.size(), 0.0);
    for (std::size_t b = 0; b < block_count; ++b)
        for (std::size_t idx : blocks[b]) freq[idx] += priors[b] / static_cast<double>(L);
    return BlockCode(SignalEnsemble(base.states, std::move(freq)), L, std::move(blocks),
                     std::move(priors));
}

// ---------------------------------------------------------------------------
// Block-ensemble quantities

// The mixture over blocks of L-fold products, one registered factor per
// slot (times the base factor structure).
inline Ensemble block_ensemble(const BlockCode& code) {
    std::vector<Ensemble> block_states;
    block_states.reserve(code.blocks.size());
    for (const auto& blk : code.blocks) {
        Ensemble state = code.base.states[blk[0]];
        for (std::size_t l = 1; l < code.length; ++l)
            state = product(state, code.base.states[blk[l]]);
        block_states.push_back(std::move(state));
    }
    return mix(SignalEnsemble(std::move(block_states), code.block_priors));
}

// Average state occupying slot l: the base mixture reweighted by that slot's
// occupation frequencies.
inline Ensemble average_slot_state(const BlockCode& code, std::size_t slot) {
    if (slot >= code.length)
        throw ValidationError("average_slot_state: slot index out of range");
    std::vector<double> w(code.base.size(), 0.0);
    for (std::size_t b = 0; b < code.blocks.size(); ++b)
        w[code.blocks[b][slot]] += code.block_priors[b];
    return mix(SignalEnsemble(code.base.states, std::move(w)));
}

// The two-step chain ln V(block mixture) <= sum_l ln V(slot average)
// <= L ln V(base mixture), plus the concavity statement
// (1/L) sum_l S(slot average) <= S(base mixture) that powers the second step.
struct BlockBoundsReport {
    std::size_t length = 0;
    double log_volume_block = 0.0;
    double log_volume_slots = 0.0;
    double log_volume_power = 0.0;
    BoundReport block_projection;
    BoundReport slot_power;
    BoundReport concavity;
    bool pass = true;
};

inline BlockBoundsReport block_volume_bounds(const BlockCode& code, const VolumeContext& ctx = {}) {
    BlockBoundsReport r;
    r.length = code.length;
    r.log_volume_block = log_volume(block_ensemble(code), ctx);
    double slot_entropy_sum = 0.0;
    r.log_volume_slots = 0.0;
    for (std::size_t l = 0; l < code.length; ++l) {
        const Ensemble avg = average_slot_state(code, l);
        r.log_volume_slots += log_volume(avg, ctx);
        slot_entropy_sum += entropy(avg);
    }
    const Ensemble base_mix = mix(code.base);
    r.log_volume_power = static_cast<double>(code.length) * log_volume(base_mix, ctx);
    r.block_projection = BoundReport::make("block_projection", r.log_volume_block,
                                           r.log_volume_slots, "log-volume (nats)", 1e-9);
    r.slot_power = BoundReport::make("slot_power", r.log_volume_slots, r.log_volume_power,
                                     "log-volume (nats)", 1e-9);
    r.concavity = BoundReport::make("concavity", slot_entropy_sum / static_cast<double>(code.length),
                                    entropy(base_mix), "nats", 1e-9);
    r.pass = r.block_projection.pass && r.slot_power.pass && r.concavity.pass;
    return r;
}

// ---------------------------------------------------------------------------
// Typical-set quantities (log-space)

// ln of prod_i V(rho_i)^{p_i L}.
inline double typical_log_volume(const SignalEnsemble& s, std::size_t L,
                                 const VolumeContext& ctx = {}) {
    if (L == 0)
        throw ValidationError("typical_log_volume: block length must be at least 1");
    double sum = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i)
        sum += s.priors[i] * log_volume(s.states[i], ctx);
    return static_cast<double>(L) * sum;
}

inline double typical_volume(const SignalEnsemble& s, std::size_t L, const VolumeContext& ctx = {}) {
    return std::exp(typical_log_volume(s, L, ctx));
}

// ln of the typical-block count estimate exp(L H(p)).
inline double typical_count_log(const std::vector<double>& priors, std::size_t L) {
    if (L == 0)
        throw ValidationError("typical_count_log: block length must be at least 1");
    std::vector<double> p = priors;
    detail::clip_and_check_probabilities(p, "typical_count_log priors");
    return static_cast<double>(L) * shannon_entropy(p);
}

inline double typical_count(const std::vector<double>& priors, std::size_t L) {
    return std::exp(typical_count_log(priors, L));
}

} // namespace ensvol
