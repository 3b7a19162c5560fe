#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "extropy/rng.hpp"

namespace extropy {

struct WindowSpec {
    int64_t lo = 0;
    int64_t hi = 0;

    int64_t size() const { return hi - lo; }
    bool contains(const WindowSpec& inner) const { return lo <= inner.lo && inner.hi <= hi; }
    bool operator==(const WindowSpec&) const = default;
};

// One-sided infinite symbol tape with a read offset. Bits before
// `prefix.size()` are explicit; beyond that they are either zero or drawn
// from the counter generator, so the tape is unbounded but reproducible.
struct BitTape {
    std::shared_ptr<const std::vector<uint8_t>> prefix;
    uint64_t key = 0;
    bool random_extend = false;
    uint64_t offset = 0;

    int bit(uint64_t index) const {
        if (prefix && index < prefix->size()) return (*prefix)[index] ? 1 : 0;
        if (random_extend) return CounterRng{key}.bit(index);
        return 0;
    }
    int bit_at(uint64_t rel) const { return bit(offset + rel); }

    // value of the k leading bits after the read offset
    double value(int precision) const {
        double v = 0.0, w = 0.5;
        for (int t = 0; t < precision; ++t, w *= 0.5)
            if (bit_at(static_cast<uint64_t>(t))) v += w;
        return v;
    }
};

enum class SiteKind { real_value, bit_tape, cell };

struct SiteState {
    SiteKind kind = SiteKind::real_value;
    double value = 0.0;
    BitTape tape;
    uint8_t cell = 0;
    uint8_t cell_alphabet = 2;

    // Every site kind exposes a point of [0,1]; tapes are truncated at the
    // declared precision, cells sit at bin centers (c+1/2)/|alphabet|.
    double value_at(int tape_precision) const;
};

struct HaloPolicy {
    enum class Kind { periodic, iid_refresh, fixed_halo };
    Kind kind = Kind::periodic;
    uint64_t seed = 0; // iid_refresh
    int64_t width = 0; // fixed_halo: remaining budget per side

    static HaloPolicy periodic() { return {Kind::periodic, 0, 0}; }
    static HaloPolicy iid_refresh(uint64_t seed) { return {Kind::iid_refresh, seed, 0}; }
    static HaloPolicy fixed_halo(int64_t width) { return {Kind::fixed_halo, 0, width}; }
};

struct LatticeConfiguration {
    WindowSpec window;
    std::vector<SiteState> sites;
    HaloPolicy halo;
    int64_t time_step = 0; // elementary steps taken so far (keys iid_refresh draws)

    const SiteState& site(int64_t x) const { return sites[static_cast<size_t>(x - window.lo)]; }
    SiteState& site(int64_t x) { return sites[static_cast<size_t>(x - window.lo)]; }
};

struct SystemDefinition {
    enum class Kind { bit_tape_shift, tent_lattice, logistic_cml, elementary_ca, identity };
    Kind kind = Kind::bit_tape_shift;
    double slope = 2.0;    // tent_lattice
    double r = 4.0;        // logistic_cml
    double coupling = 0.0; // logistic_cml
    int rule = 30;         // elementary_ca
    int tau = 1;           // elementary steps per coding step

    int interaction_radius() const;
    SiteKind site_kind() const;
    std::string name() const;
};

struct MeasureSampler {
    enum class Distribution { product_uniform, bernoulli };
    SystemDefinition::Kind system_kind = SystemDefinition::Kind::bit_tape_shift;
    uint64_t seed = 0;
    Distribution distribution = Distribution::product_uniform;
    double p = 0.5; // bernoulli
};

// φ applied `steps` times (elementary map applications; the coding step τ is
// applied by encode_orbit). fixed_halo windows shrink by radius·steps per side.
LatticeConfiguration evolve(const LatticeConfiguration& config, const SystemDefinition& system,
                            int64_t steps);

// ζ_y: site x of the result holds site x+y of the argument. Periodic windows
// stay put (content rotates); other policies re-index to [lo-y, hi-y).
LatticeConfiguration translate(const LatticeConfiguration& config, int64_t y);

// d|_window = max over sites of per-site distance, tapes compared at
// `tape_precision` bits.
double sup_distance(const LatticeConfiguration& a, const LatticeConfiguration& b,
                    const WindowSpec& window, int tape_precision = 48);

LatticeConfiguration sample_initial(const MeasureSampler& sampler, const WindowSpec& window,
                                    const HaloPolicy& halo = HaloPolicy::periodic());

struct SeparationEstimate {
    double gamma = 0.0; // fitted exponent per elementary step
    double Gamma = 1.0; // envelope constant
    double C = 0.0;     // propagation speed bound, sites/step
    bool partial = false;
    std::vector<std::pair<int, double>> mean_distance; // (t, mean d)
};

// Fits the (A3) separation bound d(φ_t f1, φ_t f2) < Γ e^{γt} ε over perturbed
// pairs, shrinking the window by radius·t per side.
SeparationEstimate estimate_separation_rate(const SystemDefinition& system, double eps,
                                            const WindowSpec& window, int tmax, int trials,
                                            uint64_t seed);

} // namespace extropy
