#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "strictlab/model.hpp"

namespace strictlab {

// Bond-length classes: short (r <= rho), intermediate, long (r >= rho+eps).
enum class BondClass { LT, MID, GT };

inline BondClass classify_bond(double r, double rho, double eps) {
    if (!(r > 0.0) || !(rho > 0.0) || !(eps > 0.0))
        throw std::domain_error("classify_bond: inputs must be positive");
    if (r <= rho) return BondClass::LT;
    if (r >= rho + eps) return BondClass::GT;
    return BondClass::MID;
}

enum class Phase { Contracted, Expanded, Undetermined };

inline const char* phase_name(Phase p) {
    switch (p) {
        case Phase::Contracted: return "Contracted";
        case Phase::Expanded: return "Expanded";
        default: return "Undetermined";
    }
}

// Contracted iff the mean short-bond fraction reaches 3/4, expanded iff the
// mean long-bond fraction does; the two can never hold together.
inline Phase classify_state(double mean_f_lt, double mean_f_gt) {
    if (mean_f_lt >= 0.75) return Phase::Contracted;
    if (mean_f_gt >= 0.75) return Phase::Expanded;
    return Phase::Undetermined;
}

struct ObservableRecord {
    double f_lt = 0.0;
    double f_mid = 0.0;
    double f_gt = 0.0;
    double m = 0.0;          // site-averaged spin
    double f_stagger = 0.0;  // bond average of 1[r<=rho] * 1[s_s != s_t]
    double energy_per_site = 0.0;
};

inline ObservableRecord measure(const Lattice& lat, const ModelParams& p,
                                const Configuration& c) {
    c.check_sizes(lat);
    const double rho = p.profile.rho;
    int n_lt = 0, n_gt = 0, n_stag = 0;
    for (int b = 0; b < lat.num_bonds(); ++b) {
        const double r = c.lengths[b];
        const bool lt = (r <= rho);
        if (lt) ++n_lt;
        else if (r >= rho + p.eps) ++n_gt;
        if (lt) {
            const auto [s, t] = lat.bond_endpoints(b);
            if (c.spins[s] != c.spins[t]) ++n_stag;
        }
    }
    long spin_sum = 0;
    for (int s = 0; s < lat.num_sites(); ++s) spin_sum += c.spins[s];

    ObservableRecord rec;
    const double nb = lat.num_bonds();
    rec.f_lt = n_lt / nb;
    rec.f_gt = n_gt / nb;
    rec.f_mid = 1.0 - rec.f_lt - rec.f_gt;  // partition identity held exactly
    rec.m = static_cast<double>(spin_sum) / lat.num_sites();
    rec.f_stagger = n_stag / nb;
    rec.energy_per_site = total_energy(lat, p, c) / lat.num_sites();
    return rec;
}

struct BinnedStats {
    double mean = 0.0;
    double std_error = 0.0;
    double tau_int = 0.5;
};

// Mean, blocking standard error and integrated autocorrelation time with
// automatic windowing (window closes at t >= 6*tau). Bin size for the
// blocking error is >= 16*tau_int, clamped so at least two bins remain.
inline BinnedStats binned_stats(const std::vector<double>& series) {
    const std::size_t n = series.size();
    if (n < 2) throw std::invalid_argument("binned_stats: need >= 2 samples");

    BinnedStats out;
    double sum = 0.0;
    for (double v : series) sum += v;
    out.mean = sum / n;

    double c0 = 0.0;
    for (double v : series) c0 += (v - out.mean) * (v - out.mean);
    c0 /= n;
    if (c0 == 0.0) {
        out.std_error = 0.0;
        out.tau_int = 0.5;
        return out;
    }

    double tau = 0.5;
    for (std::size_t t = 1; t < n / 2; ++t) {
        double ct = 0.0;
        for (std::size_t i = 0; i + t < n; ++i)
            ct += (series[i] - out.mean) * (series[i + t] - out.mean);
        ct /= (n - t);
        tau += ct / c0;
        if (static_cast<double>(t) >= 6.0 * tau) break;
    }
    out.tau_int = std::max(tau, 0.5);

    std::size_t bin = static_cast<std::size_t>(std::ceil(16.0 * out.tau_int));
    bin = std::max<std::size_t>(bin, 1);
    if (n / bin < 2) bin = n / 2;
    const std::size_t n_bins = n / bin;
    std::vector<double> bmeans(n_bins, 0.0);
    double bgrand = 0.0;
    for (std::size_t k = 0; k < n_bins; ++k) {
        double bm = 0.0;
        for (std::size_t i = k * bin; i < (k + 1) * bin; ++i) bm += series[i];
        bmeans[k] = bm / bin;
        bgrand += bmeans[k];
    }
    bgrand /= n_bins;
    double var_bins = 0.0;
    for (double bm : bmeans) var_bins += (bm - bgrand) * (bm - bgrand);
    out.std_error = std::sqrt(var_bins / (n_bins * (n_bins - 1.0)));
    return out;
}

}  // namespace strictlab
