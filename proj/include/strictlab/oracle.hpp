#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "strictlab/model.hpp"
#include "strictlab/observables.hpp"
#include "strictlab/sampler.hpp"

namespace strictlab {

struct ResourceCapError : std::runtime_error {
    explicit ResourceCapError(double count)
        : std::runtime_error("oracle: state count " + std::to_string(count) +
                             " exceeds cap 1e8"),
          state_count(count) {}
    double state_count;
};

// Exact finite model: full spin enumeration, bond integral replaced by a
// grid sum. The sampler's grid mode targets the identical discrete measure,
// so oracle-vs-sampler comparisons carry no discretization error.
struct GridModel {
    Lattice lattice{2};
    std::vector<double> grid;
    ModelParams params;
    double beta = 1.0;

    double state_count() const {
        return std::pow(2.0, lattice.num_sites()) *
               std::pow(static_cast<double>(grid.size()), lattice.num_bonds());
    }

    void validate() const {
        if (grid.size() < 2)
            throw std::invalid_argument("GridModel: grid needs >= 2 points");
        params.validate();
        if (state_count() > 1e8) throw ResourceCapError(state_count());
    }
};

// g points uniformly spaced on (0, R + 3 (beta mu)^{-1/2}]; any bond class
// without a grid representative gets one substituted at its class midpoint.
inline std::vector<double> default_grid(const ModelParams& p, double beta,
                                        std::size_t g) {
    if (g < 3) throw std::invalid_argument("default_grid: need g >= 3");
    const double upper =
        p.R + 3.0 / std::sqrt(std::max(beta, 1e-12) * p.mu);
    std::vector<double> grid(g);
    for (std::size_t i = 0; i < g; ++i)
        grid[i] = upper * (i + 1) / static_cast<double>(g);

    const double rho = p.profile.rho;
    const double reps[3] = {0.5 * rho, rho + 0.5 * p.eps,
                            std::max(rho + 1.5 * p.eps, p.R)};
    std::vector<int> cls_of(g);
    int counts[3] = {0, 0, 0};
    for (std::size_t i = 0; i < g; ++i) {
        cls_of[i] = static_cast<int>(classify_bond(grid[i], rho, p.eps));
        ++counts[cls_of[i]];
    }
    // replace a point from an over-represented class so a substitution never
    // knocks out the sole representative of another class
    for (int cls = 0; cls < 3; ++cls) {
        if (counts[cls] > 0) continue;
        std::size_t nearest = g;
        double best = 1e300;
        for (std::size_t i = 0; i < g; ++i) {
            if (counts[cls_of[i]] < 2) continue;
            const double d = std::fabs(grid[i] - reps[cls]);
            if (d < best) {
                best = d;
                nearest = i;
            }
        }
        --counts[cls_of[nearest]];
        grid[nearest] = reps[cls];
        cls_of[nearest] = cls;
        ++counts[cls];
    }
    std::sort(grid.begin(), grid.end());
    return grid;
}

struct ExactExpectations {
    double Z = 0.0;  // partition sum, rescaled by e^{-beta Hmin}
    double p_lt = 0.0;
    double p_mid = 0.0;
    double p_gt = 0.0;
    double m_abs = 0.0;
    double m_sq = 0.0;
    double pair_lt_gt = 0.0;  // <P_l^< P_l'^>> for the fixed lambda pair below
    double stagger = 0.0;
};

// The fixed lambda-neighbor pair used for the pair expectation: bond 0 and
// its first lambda neighbor. Sampler-side comparisons must use the same pair.
inline std::pair<int, int> oracle_fixed_pair(const Lattice& lat) {
    return {0, lat.lambda_neighbors(0)[0]};
}

namespace oracle_detail {

template <typename Visit>
void enumerate_states(const GridModel& model, Visit&& visit) {
    const Lattice& lat = model.lattice;
    const int ns = lat.num_sites(), nb = lat.num_bonds();
    const int g = static_cast<int>(model.grid.size());
    const ModelParams& p = model.params;

    std::vector<double> jval(g), muterm(g);
    for (int k = 0; k < g; ++k) {
        jval[k] = p.profile.j(model.grid[k]);
        const double d = model.grid[k] - p.R;
        muterm[k] = p.mu * d * d;
    }
    std::vector<std::pair<int, int>> pairs;
    lat.for_each_lambda_pair([&](int a, int b) { pairs.emplace_back(a, b); });
    std::vector<std::array<int, 2>> ends(nb);
    for (int b = 0; b < nb; ++b) ends[b] = lat.bond_endpoints(b);

    std::vector<int> gidx(nb, 0);
    std::vector<int8_t> spins(ns);
    for (std::uint32_t mask = 0; mask < (1u << ns); ++mask) {
        int spin_sum = 0;
        for (int s = 0; s < ns; ++s) {
            spins[s] = (mask >> s) & 1 ? int8_t{+1} : int8_t{-1};
            spin_sum += spins[s];
        }
        std::vector<int> sprod(nb);
        for (int b = 0; b < nb; ++b)
            sprod[b] = spins[ends[b][0]] * spins[ends[b][1]];

        std::fill(gidx.begin(), gidx.end(), 0);
        while (true) {
            double H = -p.h * spin_sum;
            for (int b = 0; b < nb; ++b)
                H += -jval[gidx[b]] * sprod[b] + muterm[gidx[b]];
            if (p.lambda != 0.0) {
                double acc = 0.0;
                for (const auto& [a, b] : pairs) {
                    const double d = model.grid[gidx[a]] - model.grid[gidx[b]];
                    acc += d * d;
                }
                H += p.lambda * acc;
            }
            visit(spins, gidx, sprod, spin_sum, H);

            int pos = 0;
            while (pos < nb && ++gidx[pos] == g) gidx[pos++] = 0;
            if (pos == nb) break;
        }
    }
}

}  // namespace oracle_detail

inline ExactExpectations exact_expectations(const GridModel& model) {
    model.validate();
    const Lattice& lat = model.lattice;
    const int ns = lat.num_sites(), nb = lat.num_bonds();
    const double rho = model.params.profile.rho;
    const double eps = model.params.eps;

    std::vector<int> cls(model.grid.size());
    for (std::size_t k = 0; k < model.grid.size(); ++k)
        cls[k] = static_cast<int>(classify_bond(model.grid[k], rho, eps));

    double hmin = 1e300;
    oracle_detail::enumerate_states(
        model, [&](const auto&, const auto&, const auto&, int, double H) {
            if (H < hmin) hmin = H;
        });

    const auto [pb1, pb2] = oracle_fixed_pair(lat);
    ExactExpectations out;
    double wsum = 0.0;
    oracle_detail::enumerate_states(model, [&](const std::vector<int8_t>&,
                                               const std::vector<int>& gidx,
                                               const std::vector<int>& sprod,
                                               int spin_sum, double H) {
        const double w = std::exp(-model.beta * (H - hmin));
        wsum += w;
        int n_lt = 0, n_mid = 0, n_gt = 0, n_stag = 0;
        for (int b = 0; b < nb; ++b) {
            const int kb = cls[gidx[b]];
            if (kb == 0) {
                ++n_lt;
                if (sprod[b] < 0) ++n_stag;
            } else if (kb == 1) {
                ++n_mid;
            } else {
                ++n_gt;
            }
        }
        const double m = static_cast<double>(spin_sum) / ns;
        out.p_lt += w * n_lt / nb;
        out.p_mid += w * n_mid / nb;
        out.p_gt += w * n_gt / nb;
        out.m_abs += w * std::fabs(m);
        out.m_sq += w * m * m;
        out.stagger += w * n_stag / nb;
        if (cls[gidx[pb1]] == 0 && cls[gidx[pb2]] == 2) out.pair_lt_gt += w;
    });

    out.Z = wsum;
    out.p_lt /= wsum;
    out.p_mid /= wsum;
    out.p_gt /= wsum;
    out.m_abs /= wsum;
    out.m_sq /= wsum;
    out.stagger /= wsum;
    out.pair_lt_gt /= wsum;
    return out;
}

struct ChessboardReport {
    double local_gt = 0.0;      // <P_l^>>
    double global_gt = 0.0;     // <P_Lambda^>>^{1/|Lambda_b|}
    bool gt_holds = false;
    double local_lt = 0.0;
    double global_lt = 0.0;
    bool lt_holds = false;
    double partition_slack = 0.0;  // 1 - <P_Lambda^<> - <P_Lambda^{0>}>
    bool partition_holds = false;
};

// Numerical probe of the chessboard estimate <P_l^>> <= <P_Lambda^>>^{1/2|L|}
// on the grid model (2|Lambda| = |Lambda_b|), plus the P^< analogue and the
// P_Lambda^< + P_Lambda^{0>} <= 1 identity.
inline ChessboardReport chessboard_check(const GridModel& model) {
    model.validate();
    const Lattice& lat = model.lattice;
    const int nb = lat.num_bonds();
    const double rho = model.params.profile.rho;
    const double eps = model.params.eps;

    std::vector<int> cls(model.grid.size());
    for (std::size_t k = 0; k < model.grid.size(); ++k)
        cls[k] = static_cast<int>(classify_bond(model.grid[k], rho, eps));

    double hmin = 1e300;
    oracle_detail::enumerate_states(
        model, [&](const auto&, const auto&, const auto&, int, double H) {
            if (H < hmin) hmin = H;
        });

    double Z = 0.0, loc_gt = 0.0, loc_lt = 0.0;
    double all_gt = 0.0, all_lt = 0.0, all_0gt = 0.0;
    oracle_detail::enumerate_states(model, [&](const std::vector<int8_t>&,
                                               const std::vector<int>& gidx,
                                               const std::vector<int>&, int,
                                               double H) {
        const double w = std::exp(-model.beta * (H - hmin));
        Z += w;
        bool every_gt = true, every_lt = true, every_0gt = true;
        for (int b = 0; b < nb; ++b) {
            const int kb = cls[gidx[b]];
            if (kb != 2) every_gt = false;
            if (kb != 0) every_lt = false;
            if (kb == 0) every_0gt = false;
        }
        if (cls[gidx[0]] == 2) loc_gt += w;
        if (cls[gidx[0]] == 0) loc_lt += w;
        if (every_gt) all_gt += w;
        if (every_lt) all_lt += w;
        if (every_0gt) all_0gt += w;
    });

    ChessboardReport rep;
    rep.local_gt = loc_gt / Z;
    rep.global_gt = std::pow(all_gt / Z, 1.0 / nb);
    rep.gt_holds = rep.local_gt <= rep.global_gt + 1e-12;
    rep.local_lt = loc_lt / Z;
    rep.global_lt = std::pow(all_lt / Z, 1.0 / nb);
    rep.lt_holds = rep.local_lt <= rep.global_lt + 1e-12;
    rep.partition_slack = 1.0 - all_lt / Z - all_0gt / Z;
    rep.partition_holds = rep.partition_slack >= -1e-12;
    return rep;
}

struct ComparisonRow {
    std::string name;
    double oracle_value = 0.0;
    double estimate = 0.0;
    double std_error = 0.0;
    double sigma = 0.0;  // |estimate - oracle| / std_error
    bool ok = false;
};

struct ComparisonReport {
    std::vector<ComparisonRow> rows;
    bool all_ok() const {
        for (const auto& r : rows)
            if (!r.ok) return false;
        return true;
    }
};

// Runs the sampler in grid mode against the identical discrete target and
// flags any observable off by more than 3 combined standard errors (the
// oracle side is exact, so the sampler error is the combined error).
inline ComparisonReport sampler_vs_oracle(const GridModel& model,
                                          const SamplerConfig& sampler_cfg) {
    const ExactExpectations ex = exact_expectations(model);

    RunSpec spec;
    spec.beta = model.beta;
    spec.params = model.params;
    spec.lattice = model.lattice;
    spec.sampler = sampler_cfg;
    spec.sampler.r_mode = RMode::Grid;
    spec.sampler.grid = model.grid;

    const auto [pb1, pb2] = oracle_fixed_pair(model.lattice);
    const double rho = model.params.profile.rho;
    const double eps = model.params.eps;
    std::vector<double> s_lt, s_mid, s_gt, s_msq, s_pair, s_stag;
    const MeasureObserver obs = [&](const Configuration& c,
                                    const ObservableRecord& rec) {
        s_lt.push_back(rec.f_lt);
        s_mid.push_back(rec.f_mid);
        s_gt.push_back(rec.f_gt);
        s_msq.push_back(rec.m * rec.m);
        s_stag.push_back(rec.f_stagger);
        const bool hit = classify_bond(c.lengths[pb1], rho, eps) == BondClass::LT &&
                         classify_bond(c.lengths[pb2], rho, eps) == BondClass::GT;
        s_pair.push_back(hit ? 1.0 : 0.0);
    };
    run(spec, obs);

    ComparisonReport rep;
    auto add = [&](const std::string& name, const std::vector<double>& series,
                   double exact) {
        const BinnedStats st = binned_stats(series);
        ComparisonRow row;
        row.name = name;
        row.oracle_value = exact;
        row.estimate = st.mean;
        row.std_error = st.std_error;
        double se = st.std_error;
        if (se == 0.0 && !series.empty()) {
            // constant series (e.g. a rare event never observed): fall back to
            // the binomial error implied by the exact value
            const double p = std::min(std::max(exact, 0.0), 1.0);
            se = std::sqrt(p * (1.0 - p) / static_cast<double>(series.size()));
        }
        const double dev = std::fabs(st.mean - exact);
        row.sigma = se > 0.0 ? dev / se : (dev == 0.0 ? 0.0 : 1e300);
        row.ok = dev <= 3.0 * se;
        rep.rows.push_back(row);
    };
    add("f_lt", s_lt, ex.p_lt);
    add("f_mid", s_mid, ex.p_mid);
    add("f_gt", s_gt, ex.p_gt);
    add("m_sq", s_msq, ex.m_sq);
    add("pair_lt_gt", s_pair, ex.pair_lt_gt);
    add("stagger", s_stag, ex.stagger);
    return rep;
}

}  // namespace strictlab
