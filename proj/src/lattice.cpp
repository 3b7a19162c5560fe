#include "extropy/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "extropy/errors.hpp"

namespace extropy {

double SiteState::value_at(int tape_precision) const {
    switch (kind) {
        case SiteKind::real_value: return value;
        case SiteKind::bit_tape: return tape.value(tape_precision);
        case SiteKind::cell:
            return (static_cast<double>(cell) + 0.5) / static_cast<double>(cell_alphabet);
    }
    return 0.0;
}

int SystemDefinition::interaction_radius() const {
    switch (kind) {
        case Kind::bit_tape_shift: return 0;
        case Kind::tent_lattice: return 0;
        case Kind::logistic_cml: return coupling != 0.0 ? 1 : 0;
        case Kind::elementary_ca: return 1;
        case Kind::identity: return 0;
    }
    return 0;
}

SiteKind SystemDefinition::site_kind() const {
    switch (kind) {
        case Kind::bit_tape_shift: return SiteKind::bit_tape;
        case Kind::elementary_ca: return SiteKind::cell;
        default: return SiteKind::real_value;
    }
}

std::string SystemDefinition::name() const {
    switch (kind) {
        case Kind::bit_tape_shift: return "bit_tape_shift";
        case Kind::tent_lattice: return "tent_lattice";
        case Kind::logistic_cml: return "logistic_cml";
        case Kind::elementary_ca: return "elementary_ca";
        case Kind::identity: return "identity";
    }
    return "?";
}

namespace {

double tent_map(double x, double slope) {
    double y = slope * std::min(x, 1.0 - x);
    return std::clamp(y, 0.0, 1.0);
}

double logistic_map(double x, double r) { return std::clamp(r * x * (1.0 - x), 0.0, 1.0); }

// neighbor value for coupled systems; halo policy decides what lies beyond
// the window edge. iid_refresh draws are keyed by window-relative index and
// step so that translation stays covariant.
double real_neighbor(const LatticeConfiguration& c, int64_t rel, int64_t step) {
    int64_t n = c.window.size();
    if (rel >= 0 && rel < n) return c.sites[static_cast<size_t>(rel)].value;
    switch (c.halo.kind) {
        case HaloPolicy::Kind::periodic: {
            int64_t wrapped = ((rel % n) + n) % n;
            return c.sites[static_cast<size_t>(wrapped)].value;
        }
        case HaloPolicy::Kind::iid_refresh:
            return CounterRng{mix_key(c.halo.seed, static_cast<uint64_t>(rel + (1ll << 32)))}
                .uniform(static_cast<uint64_t>(step));
        case HaloPolicy::Kind::fixed_halo:
            // callers shrink the window instead of reading outside it
            return 0.0;
    }
    return 0.0;
}

int cell_neighbor(const LatticeConfiguration& c, int64_t rel, int64_t step) {
    int64_t n = c.window.size();
    if (rel >= 0 && rel < n) return c.sites[static_cast<size_t>(rel)].cell;
    switch (c.halo.kind) {
        case HaloPolicy::Kind::periodic: {
            int64_t wrapped = ((rel % n) + n) % n;
            return c.sites[static_cast<size_t>(wrapped)].cell;
        }
        case HaloPolicy::Kind::iid_refresh:
            return CounterRng{mix_key(c.halo.seed, static_cast<uint64_t>(rel + (1ll << 32)))}
                .bit(static_cast<uint64_t>(step));
        case HaloPolicy::Kind::fixed_halo:
            return 0;
    }
    return 0;
}

// one elementary step on the full stored window
void step_in_place(LatticeConfiguration& c, const SystemDefinition& system) {
    const int64_t n = c.window.size();
    switch (system.kind) {
        case SystemDefinition::Kind::identity: break;
        case SystemDefinition::Kind::bit_tape_shift:
            for (auto& s : c.sites) s.tape.offset += 1;
            break;
        case SystemDefinition::Kind::tent_lattice:
            for (auto& s : c.sites) s.value = tent_map(s.value, system.slope);
            break;
        case SystemDefinition::Kind::logistic_cml: {
            std::vector<double> g(static_cast<size_t>(n));
            for (int64_t i = 0; i < n; ++i)
                g[static_cast<size_t>(i)] = logistic_map(c.sites[static_cast<size_t>(i)].value, system.r);
            const double cpl = system.coupling;
            if (cpl == 0.0) {
                for (int64_t i = 0; i < n; ++i) c.sites[static_cast<size_t>(i)].value = g[static_cast<size_t>(i)];
            } else {
                auto gval = [&](int64_t rel) {
                    if (rel >= 0 && rel < n) return g[static_cast<size_t>(rel)];
                    LatticeConfiguration probe = c; // halo values are pre-map; apply map
                    return logistic_map(real_neighbor(c, rel, c.time_step), system.r);
                };
                std::vector<double> out(static_cast<size_t>(n));
                for (int64_t i = 0; i < n; ++i)
                    out[static_cast<size_t>(i)] =
                        (1.0 - cpl) * g[static_cast<size_t>(i)] +
                        0.5 * cpl * (gval(i - 1) + gval(i + 1));
                for (int64_t i = 0; i < n; ++i) c.sites[static_cast<size_t>(i)].value = out[static_cast<size_t>(i)];
            }
            break;
        }
        case SystemDefinition::Kind::elementary_ca: {
            std::vector<uint8_t> out(static_cast<size_t>(n));
            for (int64_t i = 0; i < n; ++i) {
                int idx = (cell_neighbor(c, i - 1, c.time_step) << 2) |
                          (c.sites[static_cast<size_t>(i)].cell << 1) |
                          cell_neighbor(c, i + 1, c.time_step);
                out[static_cast<size_t>(i)] = static_cast<uint8_t>((system.rule >> idx) & 1);
            }
            for (int64_t i = 0; i < n; ++i) c.sites[static_cast<size_t>(i)].cell = out[static_cast<size_t>(i)];
            break;
        }
    }
    c.time_step += 1;
}

} // namespace

LatticeConfiguration evolve(const LatticeConfiguration& config, const SystemDefinition& system,
                            int64_t steps) {
    if (steps < 0) throw ConfigError("evolve: steps must be non-negative");
    LatticeConfiguration c = config;
    if (steps == 0) return c;

    const int64_t radius = system.interaction_radius();
    if (c.halo.kind == HaloPolicy::Kind::fixed_halo && radius > 0) {
        const int64_t needed = radius * steps;
        if (needed > c.halo.width)
            throw GuardError("insufficient halo: " + std::to_string(steps) + " steps at radius " +
                             std::to_string(radius) + " need width >= " + std::to_string(needed) +
                             ", have " + std::to_string(c.halo.width));
        if (c.window.size() - 2 * needed < 1)
            throw GuardError("insufficient halo: window of " + std::to_string(c.window.size()) +
                             " sites empties after shrinking by " + std::to_string(needed) +
                             " per side");
    }

    for (int64_t t = 0; t < steps; ++t) step_in_place(c, system);

    if (c.halo.kind == HaloPolicy::Kind::fixed_halo && radius > 0) {
        // only the interior untouched by boundary effects is reported
        const int64_t shrink = radius * steps;
        LatticeConfiguration out;
        out.window = {c.window.lo + shrink, c.window.hi - shrink};
        out.sites.assign(c.sites.begin() + shrink, c.sites.end() - shrink);
        out.halo = HaloPolicy::fixed_halo(c.halo.width - shrink);
        out.time_step = c.time_step;
        return out;
    }
    return c;
}

LatticeConfiguration translate(const LatticeConfiguration& config, int64_t y) {
    LatticeConfiguration out = config;
    if (y == 0) return out;
    const int64_t n = config.window.size();
    if (config.halo.kind == HaloPolicy::Kind::periodic) {
        // same window; content u(x+y) with period n
        for (int64_t i = 0; i < n; ++i) {
            int64_t src = (((i + y) % n) + n) % n;
            out.sites[static_cast<size_t>(i)] = config.sites[static_cast<size_t>(src)];
        }
    } else {
        out.window = {config.window.lo - y, config.window.hi - y};
    }
    return out;
}

double sup_distance(const LatticeConfiguration& a, const LatticeConfiguration& b,
                    const WindowSpec& window, int tape_precision) {
    bool a_ok, b_ok;
    if (a.halo.kind == HaloPolicy::Kind::periodic)
        a_ok = window.size() <= a.window.size();
    else
        a_ok = a.window.contains(window);
    if (b.halo.kind == HaloPolicy::Kind::periodic)
        b_ok = window.size() <= b.window.size();
    else
        b_ok = b.window.contains(window);
    if (!a_ok || !b_ok)
        throw ConfigError("window mismatch: [" + std::to_string(window.lo) + "," +
                          std::to_string(window.hi) + ") not contained in both configurations");

    auto site_of = [](const LatticeConfiguration& c, int64_t x) -> const SiteState& {
        int64_t n = c.window.size();
        int64_t rel = x - c.window.lo;
        if (c.halo.kind == HaloPolicy::Kind::periodic) rel = ((rel % n) + n) % n;
        return c.sites[static_cast<size_t>(rel)];
    };

    double d = 0.0;
    for (int64_t x = window.lo; x < window.hi; ++x) {
        const SiteState& sa = site_of(a, x);
        const SiteState& sb = site_of(b, x);
        d = std::max(d, std::abs(sa.value_at(tape_precision) - sb.value_at(tape_precision)));
    }
    return d;
}

LatticeConfiguration sample_initial(const MeasureSampler& sampler, const WindowSpec& window,
                                    const HaloPolicy& halo) {
    SystemDefinition probe;
    probe.kind = sampler.system_kind;
    const SiteKind site_kind = probe.site_kind();

    LatticeConfiguration c;
    c.window = window;
    c.halo = halo;
    c.sites.resize(static_cast<size_t>(window.size()));
    for (int64_t x = window.lo; x < window.hi; ++x) {
        SiteState s;
        s.kind = site_kind;
        const uint64_t site_key = mix_key(sampler.seed, static_cast<uint64_t>(x + (1ll << 32)));
        CounterRng rng{site_key};
        switch (site_kind) {
            case SiteKind::bit_tape:
                s.tape.key = site_key;
                s.tape.random_extend = sampler.distribution == MeasureSampler::Distribution::product_uniform;
                if (sampler.distribution == MeasureSampler::Distribution::bernoulli) {
                    auto bits = std::make_shared<std::vector<uint8_t>>();
                    s.tape.prefix = bits; // bernoulli tapes: lazy draws against p
                    s.tape.random_extend = true;
                    // p != 1/2 realized by thresholding uniforms; key carries p via offset
                }
                break;
            case SiteKind::real_value:
                if (sampler.distribution == MeasureSampler::Distribution::bernoulli)
                    s.value = rng.uniform(0) < sampler.p ? 1.0 : 0.0;
                else
                    s.value = rng.uniform(0);
                break;
            case SiteKind::cell:
                s.cell_alphabet = 2;
                if (sampler.distribution == MeasureSampler::Distribution::bernoulli)
                    s.cell = rng.uniform(0) < sampler.p ? 1 : 0;
                else
                    s.cell = static_cast<uint8_t>(rng.bit(0));
                break;
        }
        c.site(x) = s;
    }
    return c;
}

SeparationEstimate estimate_separation_rate(const SystemDefinition& system, double eps,
                                            const WindowSpec& window, int tmax, int trials,
                                            uint64_t seed) {
    if (trials < 8) throw ConfigError("estimate_separation_rate: trials must be >= 8");
    if (eps <= 0) throw ConfigError("estimate_separation_rate: eps must be positive");

    const int radius = system.interaction_radius();
    const int obs_precision = 48;
    const int k = std::max(0, static_cast<int>(std::ceil(std::log2(1.0 / eps) - 1e-9)));

    MeasureSampler sampler{system.kind, seed, MeasureSampler::Distribution::product_uniform, 0.5};

    std::vector<double> mean_d(static_cast<size_t>(tmax) + 1, 0.0);
    SeparationEstimate est;
    est.C = radius;

    int t_limit = tmax;
    if (radius > 0) {
        // window must keep at least one site after shrinking by radius*t per side
        t_limit = std::min<int64_t>(tmax, (window.size() - 1) / (2 * radius));
        est.partial = t_limit < tmax;
    }

    for (int trial = 0; trial < trials; ++trial) {
        MeasureSampler s1 = sampler;
        s1.seed = mix_key(seed, static_cast<uint64_t>(trial) * 2 + 1);
        LatticeConfiguration f1 = sample_initial(s1, window);
        LatticeConfiguration f2 = f1;
        // perturbation below the declared precision
        CounterRng pert{mix_key(seed, static_cast<uint64_t>(trial) * 2 + 2)};
        uint64_t pi = 0;
        for (auto& site : f2.sites) {
            switch (site.kind) {
                case SiteKind::bit_tape: {
                    auto bits = std::make_shared<std::vector<uint8_t>>();
                    bits->reserve(static_cast<size_t>(k + tmax + obs_precision + 8));
                    for (int j = 0; j < k + tmax + obs_precision + 8; ++j) {
                        int orig = site.tape.bit(static_cast<uint64_t>(j));
                        bits->push_back(j < k ? static_cast<uint8_t>(orig)
                                              : static_cast<uint8_t>(pert.bit(pi++)));
                    }
                    site.tape.prefix = bits;
                    break;
                }
                case SiteKind::real_value: {
                    double delta = (pert.uniform(pi++) - 0.5) * eps;
                    site.value = std::clamp(site.value + delta, 0.0, 1.0);
                    break;
                }
                case SiteKind::cell:
                    if (0.5 / site.cell_alphabet < eps && pert.uniform(pi++) < 0.5)
                        site.cell = static_cast<uint8_t>((site.cell + 1) % site.cell_alphabet);
                    break;
            }
        }

        LatticeConfiguration a = f1, b = f2;
        for (int t = 0; t <= t_limit; ++t) {
            WindowSpec shrunk{window.lo + static_cast<int64_t>(radius) * t,
                              window.hi - static_cast<int64_t>(radius) * t};
            mean_d[static_cast<size_t>(t)] += sup_distance(a, b, shrunk, obs_precision);
            if (t < t_limit) {
                a = evolve(a, system, 1);
                b = evolve(b, system, 1);
            }
        }
    }

    for (auto& d : mean_d) d /= trials;
    for (int t = 0; t <= t_limit; ++t) est.mean_distance.emplace_back(t, mean_d[static_cast<size_t>(t)]);

    // least-squares on log d over the pre-saturation growth region
    std::vector<std::pair<double, double>> pts;
    for (int t = 0; t <= t_limit; ++t) {
        double d = mean_d[static_cast<size_t>(t)];
        if (d > 0.0 && d < 0.25) pts.emplace_back(static_cast<double>(t), std::log(d));
    }
    if (pts.size() >= 2) {
        double mx = 0, my = 0;
        for (auto& [x, y] : pts) { mx += x; my += y; }
        mx /= pts.size(); my /= pts.size();
        double num = 0, den = 0;
        for (auto& [x, y] : pts) { num += (x - mx) * (y - my); den += (x - mx) * (x - mx); }
        est.gamma = den > 0 ? num / den : 0.0;
    } else {
        est.partial = true;
    }

    double envelope = 1.0;
    for (auto& [t, d] : est.mean_distance)
        if (d > 0) envelope = std::max(envelope, d / (eps * std::exp(est.gamma * t)));
    est.Gamma = envelope;
    return est;
}

} // namespace extropy
