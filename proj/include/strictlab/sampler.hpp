#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "strictlab/model.hpp"
#include "strictlab/observables.hpp"

namespace strictlab {

// Deterministic stream-splitting: each replica seeds its own mt19937_64 from
// splitmix64(seed ^ stream), so replica-parallel runs do not share state.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d4da2b0073879dULL;
    return x ^ (x >> 31);
}

enum class RMode { Continuous, Grid };
enum class InitKind { ContractedAligned, ExpandedDisordered, Custom };

struct SamplerConfig {
    std::uint64_t seed = 1;
    std::size_t therm_sweeps = 0;
    std::size_t measure_sweeps = 0;
    std::size_t measure_stride = 1;
    double proposal_width = 0.0;  // 0 = auto
    RMode r_mode = RMode::Continuous;
    std::vector<double> grid;
    InitKind init = InitKind::ExpandedDisordered;
    std::optional<Configuration> custom_init;

    void validate() const {
        if (measure_stride == 0)
            throw std::invalid_argument("SamplerConfig: measure_stride must be >= 1");
        if (r_mode == RMode::Grid) {
            if (grid.size() < 2)
                throw std::invalid_argument("SamplerConfig: grid needs >= 2 points");
            for (std::size_t i = 0; i < grid.size(); ++i) {
                if (!(grid[i] > 0.0) || (i > 0 && !(grid[i] > grid[i - 1])))
                    throw std::invalid_argument(
                        "SamplerConfig: grid must be positive and increasing");
            }
        }
    }
};

struct RunSpec {
    double beta = 1.0;
    ModelParams params;
    Lattice lattice{2};
    SamplerConfig sampler;

    void validate() const {
        if (!(beta >= 0.0)) throw std::invalid_argument("RunSpec: beta must be >= 0");
        params.validate();
        sampler.validate();
    }
};

// proposal_width default: min(rho/2, (beta mu)^{-1/2}) clamped to [1e-3 R, R].
inline double effective_proposal_width(const RunSpec& spec) {
    if (spec.sampler.proposal_width > 0.0) return spec.sampler.proposal_width;
    const double rho = spec.params.profile.rho;
    double w = 0.5 * rho;
    if (spec.beta > 0.0)
        w = std::min(w, 1.0 / std::sqrt(spec.beta * spec.params.mu));
    return std::clamp(w, 1e-3 * spec.params.R, spec.params.R);
}

inline Configuration init_configuration(const RunSpec& spec) {
    const Lattice& lat = spec.lattice;
    Configuration c;
    c.spins.assign(lat.num_sites(), +1);
    switch (spec.sampler.init) {
        case InitKind::ContractedAligned: {
            const auto& f = spec.params.profile;
            c.lengths.assign(lat.num_bonds(), 0.5 * (f.k_lo + f.k_hi));
            break;
        }
        case InitKind::ExpandedDisordered: {
            c.lengths.assign(lat.num_bonds(), spec.params.R);
            std::mt19937_64 rng(splitmix64(spec.sampler.seed ^ 0x1ce1ce1cULL));
            for (auto& s : c.spins)
                s = (rng() & 1) ? int8_t{+1} : int8_t{-1};
            break;
        }
        case InitKind::Custom: {
            if (!spec.sampler.custom_init)
                throw std::invalid_argument("init_configuration: missing custom config");
            c = *spec.sampler.custom_init;
            c.check_sizes(lat);
            break;
        }
    }
    return c;
}

struct Acceptance {
    double spin_rate = 0.0;
    double bond_rate = 0.0;
};

// One sweep: |sites| single-spin-flip attempts in typewriter order, then
// |bonds| single-bond attempts. Continuous mode proposes a Gaussian step
// reflected at 0 (symmetric, no Jacobian); grid mode proposes a uniform
// grid point.
inline Acceptance metropolis_sweep(const RunSpec& spec, Configuration& c,
                                   std::mt19937_64& rng) {
    const Lattice& lat = spec.lattice;
    const ModelParams& p = spec.params;
    const double beta = spec.beta;
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    int spin_acc = 0;
    for (int s = 0; s < lat.num_sites(); ++s) {
        const double dh = delta_energy_spin_flip(lat, p, c, s);
        if (unif(rng) < std::exp(-beta * dh)) {
            c.spins[s] = -c.spins[s];
            ++spin_acc;
        }
    }

    int bond_acc = 0;
    const double width = effective_proposal_width(spec);
    std::normal_distribution<double> step(0.0, width);
    const auto& grid = spec.sampler.grid;
    for (int b = 0; b < lat.num_bonds(); ++b) {
        double r_new;
        if (spec.sampler.r_mode == RMode::Grid) {
            r_new = grid[rng() % grid.size()];
        } else {
            r_new = std::fabs(c.lengths[b] + step(rng));
            if (r_new == 0.0) continue;  // keep lengths strictly positive
        }
        const double dh = delta_energy_bond_move(lat, p, c, b, r_new);
        if (unif(rng) < std::exp(-beta * dh)) {
            c.lengths[b] = r_new;
            ++bond_acc;
        }
    }

    return {static_cast<double>(spin_acc) / lat.num_sites(),
            static_cast<double>(bond_acc) / lat.num_bonds()};
}

struct RunResult {
    std::vector<ObservableRecord> series;
    double spin_acceptance = 0.0;
    double bond_acceptance = 0.0;
    Configuration final_config;
};

using MeasureObserver =
    std::function<void(const Configuration&, const ObservableRecord&)>;

// Thermalize, then measure every measure_stride-th sweep. Deterministic for
// a fixed (seed, spec) regardless of how many replicas run elsewhere.
inline RunResult run(const RunSpec& spec, const MeasureObserver& observer = {}) {
    spec.validate();
    Configuration c = init_configuration(spec);
    std::mt19937_64 rng(splitmix64(spec.sampler.seed));

    RunResult out;
    for (std::size_t i = 0; i < spec.sampler.therm_sweeps; ++i)
        metropolis_sweep(spec, c, rng);

    double sa = 0.0, ba = 0.0;
    for (std::size_t i = 0; i < spec.sampler.measure_sweeps; ++i) {
        const Acceptance a = metropolis_sweep(spec, c, rng);
        sa += a.spin_rate;
        ba += a.bond_rate;
        if ((i + 1) % spec.sampler.measure_stride == 0) {
            const ObservableRecord rec = measure(spec.lattice, spec.params, c);
            out.series.push_back(rec);
            if (observer) observer(c, rec);
        }
    }
    if (spec.sampler.measure_sweeps > 0) {
        sa /= spec.sampler.measure_sweeps;
        ba /= spec.sampler.measure_sweeps;
    }
    out.spin_acceptance = sa;
    out.bond_acceptance = ba;
    out.final_config = std::move(c);
    return out;
}

enum class RampDirection { Up, Down };

struct HysteresisPoint {
    double beta = 0.0;
    RampDirection direction = RampDirection::Up;
    std::vector<ObservableRecord> series;
    Acceptance acceptance;
};

// Ramp beta up the schedule then back down, carrying the configuration
// across steps; metastability shows up as a branch gap between directions.
inline std::vector<HysteresisPoint> hysteresis_run(
    const RunSpec& spec, const std::vector<double>& beta_schedule) {
    if (beta_schedule.empty())
        throw std::invalid_argument("hysteresis_run: empty schedule");
    spec.validate();
    Configuration c = init_configuration(spec);
    std::mt19937_64 rng(splitmix64(spec.sampler.seed));

    std::vector<HysteresisPoint> out;
    auto run_leg = [&](double beta, RampDirection dir) {
        RunSpec leg = spec;
        leg.beta = beta;
        for (std::size_t i = 0; i < leg.sampler.therm_sweeps; ++i)
            metropolis_sweep(leg, c, rng);
        HysteresisPoint pt;
        pt.beta = beta;
        pt.direction = dir;
        double sa = 0.0, ba = 0.0;
        for (std::size_t i = 0; i < leg.sampler.measure_sweeps; ++i) {
            const Acceptance a = metropolis_sweep(leg, c, rng);
            sa += a.spin_rate;
            ba += a.bond_rate;
            if ((i + 1) % leg.sampler.measure_stride == 0)
                pt.series.push_back(measure(leg.lattice, leg.params, c));
        }
        if (leg.sampler.measure_sweeps > 0) {
            sa /= leg.sampler.measure_sweeps;
            ba /= leg.sampler.measure_sweeps;
        }
        pt.acceptance = {sa, ba};
        out.push_back(std::move(pt));
    };

    for (double beta : beta_schedule) run_leg(beta, RampDirection::Up);
    for (auto it = beta_schedule.rbegin(); it != beta_schedule.rend(); ++it)
        run_leg(*it, RampDirection::Down);
    return out;
}

}  // namespace strictlab
