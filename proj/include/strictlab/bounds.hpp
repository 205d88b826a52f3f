#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "strictlab/model.hpp"

namespace strictlab {
namespace bounds {

inline constexpr double kPi = 3.14159265358979323846;

// All right-hand sides are evaluated in log-space and exponentiated last, so
// the regime checks stay meaningful when beta * R^2 is huge.

namespace detail {
inline double stiff(const ModelParams& p) { return p.mu + 8.0 * p.lambda; }
}  // namespace detail

// U - u > mu R^2 + 2 lambda rho^2, the condition making the long-bond bound
// decay at low temperature.
inline bool cond_2_12(const ModelParams& p) {
    const auto& f = p.profile;
    return f.U - f.u > p.mu * p.R * p.R + 2.0 * p.lambda * f.rho * f.rho;
}

inline double log_bound_p_gt(const ModelParams& p, double beta) {
    const auto& f = p.profile;
    const double gap = f.U - f.u - p.mu * p.R * p.R - 2.0 * p.lambda * f.rho * f.rho;
    return std::log(2.0 * std::sqrt(2.0 * kPi) / (f.rho * std::sqrt(beta * p.mu))) -
           beta * gap;
}

inline double bound_p_gt(const ModelParams& p, double beta) {
    return std::exp(log_bound_p_gt(p, beta));
}

inline double log_bound_p_lt(const ModelParams& p, double beta) {
    const auto& f = p.profile;
    const double d = f.rho - p.R;
    return 0.5 * std::log(2.0 * beta * detail::stiff(p) / kPi) + std::log(f.rho) +
           beta * (f.U_bar + f.u - p.mu * d * d);
}

inline double bound_p_lt(const ModelParams& p, double beta) {
    return std::exp(log_bound_p_lt(p, beta));
}

struct PairBound {
    double low_t = 0.0;
    double high_t = 0.0;
    double effective = 0.0;
};

inline double log_bound_pair_low_t(const ModelParams& p, double beta) {
    const auto& f = p.profile;
    const double d = f.rho - p.R;
    const double expo = f.U_bar + f.u - 2.0 * f.U - p.mu * d * d +
                        2.0 * p.mu * p.R * p.R - p.lambda * p.eps * p.eps +
                        4.0 * p.lambda * f.rho * f.rho;
    return std::log(8.0 / f.rho) + 0.5 * std::log(kPi / (beta * p.mu)) + beta * expo;
}

inline double log_bound_pair_high_t(const ModelParams& p, double beta) {
    const auto& f = p.profile;
    const double d = f.rho - p.R;
    const double expo = f.U_bar + 3.0 * f.u - p.mu * d * d - p.lambda * p.eps * p.eps;
    return std::log(2.0 * f.rho * detail::stiff(p)) +
           0.5 * std::log(beta / (kPi * p.mu)) + beta * expo;
}

inline PairBound bound_pair(const ModelParams& p, double beta) {
    PairBound out;
    out.low_t = std::exp(log_bound_pair_low_t(p, beta));
    out.high_t = std::exp(log_bound_pair_high_t(p, beta));
    out.effective = std::min(out.low_t, out.high_t);
    return out;
}

inline double log_bound_p0(const ModelParams& p, double beta) {
    const auto& f = p.profile;
    const double d = f.rho + p.eps - p.R;
    return 0.5 * std::log(2.0 * beta * detail::stiff(p) / kPi) + std::log(p.eps) -
           beta * (p.mu * d * d - 2.0 * f.u);
}

inline double bound_p0(const ModelParams& p, double beta) {
    return std::exp(log_bound_p0(p, beta));
}

struct StaggerBound {
    double a = 0.0;
    double b = 0.0;
    double effective = 0.0;
};

inline double log_bound_stagger_a(const ModelParams& p, double beta) {
    const auto& f = p.profile;
    const double d = f.rho - p.R;
    return std::log(2.0) - beta * (f.U + p.mu * d * d - p.mu * p.R * p.R -
                                   2.0 * p.lambda * f.rho * f.rho);
}

inline double log_bound_stagger_b(const ModelParams& p, double beta) {
    const auto& f = p.profile;
    const double d = f.rho - p.R;
    return std::log(f.rho) + 0.5 * std::log(beta * detail::stiff(p) / kPi) -
           beta * (p.mu * d * d - f.u);
}

inline StaggerBound bound_stagger(const ModelParams& p, double beta) {
    StaggerBound out;
    out.a = std::exp(log_bound_stagger_a(p, beta));
    out.b = std::exp(log_bound_stagger_b(p, beta));
    out.effective = std::min(out.a, out.b);
    return out;
}

// beta* = 2 R^-2 ln R, the crossover scale between the two pair estimates.
inline double beta_star(double R) {
    if (!(R > 1.0)) throw std::domain_error("beta_star: R must be > 1");
    return 2.0 * std::log(R) / (R * R);
}

// Solves (rho/2) e^{beta(U - mu R^2 - 2 lambda rho^2)} =
// sqrt(pi / (beta(mu+8lambda))) e^{-beta u} by bisection on the log
// difference, which is strictly increasing when the left exponent is positive.
inline double solve_crossover(const ModelParams& p) {
    const auto& f = p.profile;
    const double lhs_slope = f.U - p.mu * p.R * p.R - 2.0 * p.lambda * f.rho * f.rho;
    auto g = [&](double beta) {
        const double log_lhs = std::log(0.5 * f.rho) + beta * lhs_slope;
        const double log_rhs =
            0.5 * std::log(kPi / (beta * detail::stiff(p))) - beta * f.u;
        return log_lhs - log_rhs;
    };
    double lo = 1e-6, hi = 1e2;
    double glo = g(lo), ghi = g(hi);
    if (glo == 0.0) return lo;
    if (ghi == 0.0) return hi;
    if ((glo < 0.0) == (ghi < 0.0))
        throw std::runtime_error("solve_crossover: no crossover in range");
    while ((hi - lo) > 1e-10 * (0.5 * (hi + lo))) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if ((gm < 0.0) == (glo < 0.0)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

struct BoundReport {
    double beta = 0.0;
    double p_gt_bound = 0.0;
    bool cond_2_12 = false;
    double p_lt_bound = 0.0;
    double pair_low_t = 0.0;
    double pair_high_t = 0.0;
    double pair_bound = 0.0;
    double p0_bound = 0.0;
    double stagger_bound_a = 0.0;
    double stagger_bound_b = 0.0;
    double stagger_bound = 0.0;
};

inline BoundReport make_report(const ModelParams& p, double beta) {
    if (!(beta > 0.0)) throw std::domain_error("make_report: beta must be > 0");
    BoundReport r;
    r.beta = beta;
    r.p_gt_bound = bound_p_gt(p, beta);
    r.cond_2_12 = cond_2_12(p);
    r.p_lt_bound = bound_p_lt(p, beta);
    const PairBound pb = bound_pair(p, beta);
    r.pair_low_t = pb.low_t;
    r.pair_high_t = pb.high_t;
    r.pair_bound = pb.effective;
    r.p0_bound = bound_p0(p, beta);
    const StaggerBound sb = bound_stagger(p, beta);
    r.stagger_bound_a = sb.a;
    r.stagger_bound_b = sb.b;
    r.stagger_bound = sb.effective;
    return r;
}

struct RegimeCheck {
    std::string name;
    bool pass = false;
    // log(threshold) - log(value) at the worst grid point; positive = pass.
    double worst_margin = 0.0;
};

struct RegimeReport {
    std::vector<RegimeCheck> checks;
    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

// The closing chain of the preset-parameter argument, checked on a beta grid:
//   1. U - u > mu R^2 + 2 lambda rho^2
//   2. pair low-T bound <= R^{-4 delta^2} for grid beta >= beta*
//   3. pair high-T bound <= R^{-3 delta^2} for grid beta <= beta*
//   4. sup_beta P0 bound <= 6 delta/(1-3delta) sqrt(1/(pi e))
//   5. sup_beta stagger-b bound <= 3 R^-1 sqrt(1/(2 pi e [(R-1/R)^2 - delta]))
// Comparisons are done between logs; the preset fixes mu + 8 lambda = 9.
inline RegimeReport verify_regime(double R, double delta,
                                  const std::vector<double>& beta_grid) {
    if (beta_grid.empty())
        throw std::invalid_argument("verify_regime: empty beta grid");
    if (!(R > 1.0)) throw std::domain_error("verify_regime: R must be > 1");
    const ModelParams p = preset_params(R, delta);
    const double bstar = beta_star(R);
    const double inf = std::numeric_limits<double>::infinity();
    RegimeReport rep;

    {
        const auto& f = p.profile;
        const double lhs = f.U - f.u;
        const double rhs = p.mu * p.R * p.R + 2.0 * p.lambda * f.rho * f.rho;
        rep.checks.push_back({"cond_2_12", lhs > rhs, lhs - rhs});
    }
    {
        const double log_thr = -4.0 * delta * delta * std::log(R);
        double margin = inf;
        for (double b : beta_grid)
            if (b >= bstar)
                margin = std::min(margin, log_thr - log_bound_pair_low_t(p, b));
        rep.checks.push_back({"pair_low_t_le_R^-4d2", margin >= 0.0, margin});
    }
    {
        const double log_thr = -3.0 * delta * delta * std::log(R);
        double margin = inf;
        for (double b : beta_grid)
            if (b <= bstar)
                margin = std::min(margin, log_thr - log_bound_pair_high_t(p, b));
        rep.checks.push_back({"pair_high_t_le_R^-3d2", margin >= 0.0, margin});
    }
    {
        const double log_thr = std::log(6.0 * delta / (1.0 - 3.0 * delta)) +
                               0.5 * std::log(1.0 / (kPi * std::exp(1.0)));
        double margin = inf;
        for (double b : beta_grid)
            margin = std::min(margin, log_thr - log_bound_p0(p, b));
        rep.checks.push_back({"p0_sup_le_6d/(1-3d)sqrt(1/pie)", margin >= 0.0, margin});
    }
    {
        const double d = p.R - 1.0 / p.R;
        const double log_thr =
            std::log(3.0 / R) +
            0.5 * std::log(1.0 / (2.0 * kPi * std::exp(1.0) * (d * d - delta)));
        double margin = inf;
        for (double b : beta_grid)
            margin = std::min(margin, log_thr - log_bound_stagger_b(p, b));
        rep.checks.push_back({"stagger_sup_le_3/R_sqrt", margin >= 0.0, margin});
    }
    return rep;
}

}  // namespace bounds
}  // namespace strictlab
