#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "strictlab/lattice.hpp"

namespace strictlab {

// Spin-spin coupling strength as a function of bond length. The default is a
// three-level step: strong everywhere below rho (with a slightly higher peak
// U_bar below rho/2, so max J = U_bar) and a weak tail u beyond rho. The
// strong set K = [k_lo, k_hi) must have measure >= rho/2.
struct InteractionProfile {
    enum class Shape { Step, Logistic };  // Logistic is experimental

    double U = 0.0;      // floor of J on the strong set K
    double U_bar = 0.0;  // global maximum of J
    double u = 0.0;      // weak tail level, J(r) <= u for r >= rho
    double rho = 0.0;    // weak/strong threshold
    double k_lo = 0.0;
    double k_hi = 0.0;
    Shape shape = Shape::Step;
    double blend_width = 0.0;  // only used by Shape::Logistic

    double kappa() const { return U_bar / U - 1.0; }

    double operator()(double r) const { return j(r); }

    double j(double r) const {
        if (!(r > 0.0))
            throw std::domain_error("InteractionProfile: r must be > 0");
        if (shape == Shape::Logistic) {
            const double w = blend_width > 0.0 ? blend_width : 0.02 * rho;
            return u + (U - u) / (1.0 + std::exp((r - rho) / w)) +
                   (U_bar - U) / (1.0 + std::exp((r - 0.5 * rho) / w));
        }
        if (r < 0.5 * rho) return U_bar;
        if (r < rho) return U;
        return u;
    }

    void validate() const {
        if (!(U > 0.0) || !(U_bar >= U) || !(u >= 0.0) || !(rho > 0.0))
            throw std::invalid_argument("InteractionProfile: bad levels");
        if (!(k_hi - k_lo >= 0.5 * rho) || k_lo < 0.0 || k_hi > rho + 1e-12)
            throw std::invalid_argument("InteractionProfile: strong set too small");
    }
};

struct ModelParams {
    double mu = 1.0;       // harmonic spacing stiffness, > 0
    double lambda = 1.0;   // lattice-regularity stiffness, >= 0
    double R = 1.0;        // rest spacing
    double h = 0.0;        // external field
    double eps = 0.0;      // indicator gap between "short" and "long"
    InteractionProfile profile;

    void validate() const {
        if (!(mu > 0.0) || !(eps > 0.0) || !(R > 0.0) || lambda < 0.0)
            throw std::invalid_argument("ModelParams: need mu>0, eps>0, R>0, lambda>=0");
        profile.validate();
    }
};

// One Ising spin per site, one positive length per bond.
struct Configuration {
    std::vector<int8_t> spins;    // +-1
    std::vector<double> lengths;  // > 0

    void check_sizes(const Lattice& lat) const {
        if (static_cast<int>(spins.size()) != lat.num_sites() ||
            static_cast<int>(lengths.size()) != lat.num_bonds())
            throw std::invalid_argument("Configuration: size mismatch with lattice");
    }
};

// Parameter preset lambda=mu=1, U=2R^2, U_bar=(2+delta^2)R^2, u=delta,
// rho=1/R, eps=2*delta*R, h=0, step profile with K=[0,rho).
inline ModelParams preset_params(double R, double delta) {
    if (!(R > 0.0))
        throw std::domain_error("preset_params: R must be > 0");
    if (!(delta > 0.0) || !(delta < 1.0 / 3.0))
        throw std::domain_error("preset_params: delta must lie in (0, 1/3)");
    ModelParams p;
    p.mu = 1.0;
    p.lambda = 1.0;
    p.R = R;
    p.h = 0.0;
    const double rho = 1.0 / R;
    p.eps = 2.0 * delta * R;
    p.profile = InteractionProfile{2.0 * R * R, (2.0 + delta * delta) * R * R,
                                   delta, rho, 0.0, rho};
    p.validate();
    return p;
}

inline double j_of_r(const InteractionProfile& profile, double r) {
    return profile.j(r);
}

// H = -sum_b J(r)ss' + mu sum_b (r-R)^2 + lambda sum_pairs (r-r')^2 - h sum_s s
inline double total_energy(const Lattice& lat, const ModelParams& p,
                           const Configuration& c) {
    c.check_sizes(lat);
    double coupling = 0.0, spacing = 0.0, field = 0.0, pairs = 0.0;
    for (int b = 0; b < lat.num_bonds(); ++b) {
        const auto [s, t] = lat.bond_endpoints(b);
        const double r = c.lengths[b];
        coupling += p.profile.j(r) * c.spins[s] * c.spins[t];
        const double d = r - p.R;
        spacing += d * d;
    }
    if (p.lambda != 0.0) {
        lat.for_each_lambda_pair([&](int b1, int b2) {
            const double d = c.lengths[b1] - c.lengths[b2];
            pairs += d * d;
        });
    }
    for (int s = 0; s < lat.num_sites(); ++s) field += c.spins[s];
    return -coupling + p.mu * spacing + p.lambda * pairs - p.h * field;
}

// Energy change of flipping the spin at `site`.
inline double delta_energy_spin_flip(const Lattice& lat, const ModelParams& p,
                                     const Configuration& c, int site) {
    double neighbor_sum = 0.0;
    for (int b : lat.site_bonds(site)) {
        const auto [s, t] = lat.bond_endpoints(b);
        const int other = (s == site) ? t : s;
        neighbor_sum += p.profile.j(c.lengths[b]) * c.spins[other];
    }
    return 2.0 * c.spins[site] * (neighbor_sum + p.h);
}

// Energy change of setting bond `b` to length r_new.
inline double delta_energy_bond_move(const Lattice& lat, const ModelParams& p,
                                     const Configuration& c, int b, double r_new) {
    if (!(r_new > 0.0))
        throw std::domain_error("delta_energy_bond_move: r_new must be > 0");
    const auto [s, t] = lat.bond_endpoints(b);
    const double r_old = c.lengths[b];
    const double sp = c.spins[s] * c.spins[t];
    double dh = -(p.profile.j(r_new) - p.profile.j(r_old)) * sp;
    const double dn = r_new - p.R, dold = r_old - p.R;
    dh += p.mu * (dn * dn - dold * dold);
    if (p.lambda != 0.0) {
        double pairs = 0.0;
        for (int nb : lat.lambda_neighbors(b)) {
            const double rn = c.lengths[nb];
            pairs += (r_new - rn) * (r_new - rn) - (r_old - rn) * (r_old - rn);
        }
        dh += p.lambda * pairs;
    }
    return dh;
}

}  // namespace strictlab
