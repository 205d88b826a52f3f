#include <cmath>
#include <vector>

#include "catch2/catch_amalgamated.hpp"
#include "strictlab/bounds.hpp"

using namespace strictlab;
using namespace strictlab::bounds;
using Catch::Matchers::WithinRel;

namespace {

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i)
        g[i] = lo * std::pow(hi / lo, i / (n - 1.0));
    return g;
}

}  // namespace

TEST_CASE("long-bond bound at the desk preset", "[bounds]") {
    const ModelParams p = preset_params(2.0, 0.1);
    CHECK(cond_2_12(p));
    CHECK_THAT(bound_p_gt(p, 5.0), WithinRel(1.8563451640180268e-07, 1e-12));
    // decreasing in beta past the prefactor turnover when 2.12 holds
    const double gap = 8.0 - 0.1 - 4.0 - 0.5;
    double prev = bound_p_gt(p, 1.0 / (2.0 * gap));
    for (double b = 1.0 / (2.0 * gap) + 0.1; b < 20.0; b += 0.37) {
        const double v = bound_p_gt(p, b);
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("short-bond bound at the desk preset", "[bounds]") {
    const ModelParams p = preset_params(2.0, 0.1);
    CHECK_THAT(bound_p_lt(p, 0.01), WithinRel(0.12694373305223228, 1e-12));
    CHECK(bound_p_lt(p, 1e-12) < 1e-5);  // sqrt(beta) prefactor kills it
    double prev = bound_p_lt(p, 1e-4);
    for (double b = 2e-4; b < 1.0; b *= 1.7) {
        const double v = bound_p_lt(p, b);
        CHECK(v > prev);  // exponent positive at the preset
        prev = v;
    }
}

TEST_CASE("pair bounds: exponents and limits", "[bounds]") {
    const ModelParams p = preset_params(2.0, 0.1);
    // low-T exponent (2.1)-substituted: 8.04+0.1-16-2.25+8-0.16+1 = -1.27
    const auto pb1 = bound_pair(p, 1.0);
    CHECK_THAT(pb1.low_t, WithinRel(7.964177431634078, 1e-12));
    CHECK_THAT(pb1.high_t, WithinRel(1910.0021265394948, 1e-12));
    CHECK(pb1.effective == std::min(pb1.low_t, pb1.high_t));
    CHECK(bound_pair(p, 1e-10).high_t < 1e-4);
    for (double b : {0.01, 0.3, 2.0, 9.0}) {
        const auto pb = bound_pair(p, b);
        CHECK(pb.low_t >= 0.0);
        CHECK(pb.high_t >= 0.0);
    }
}

TEST_CASE("intermediate-bond bound", "[bounds]") {
    const ModelParams p = preset_params(2.0, 0.1);
    CHECK_THAT(bound_p0(p, 0.5), WithinRel(0.4085898711227172, 1e-12));
    // maximizing beta = 1/(2[(rho+eps-R)^2 - 2u]) ~ 0.495
    const double bhat = 1.0 / (2.0 * (1.21 - 0.2));
    CHECK_THAT(bhat, WithinRel(0.49504950495049493, 1e-12));
    CHECK(bound_p0(p, bhat) >= bound_p0(p, bhat * 0.9));
    CHECK(bound_p0(p, bhat) >= bound_p0(p, bhat * 1.1));
    // linear-in-eps prefactor
    ModelParams q = p;
    q.eps = 1e-9;
    CHECK(bound_p0(q, 1.0) < 1e-6);
}

TEST_CASE("staggered-pair bounds", "[bounds]") {
    const ModelParams p = preset_params(2.0, 0.1);
    const auto sb = bound_stagger(p, 0.5);
    CHECK_THAT(sb.a, WithinRel(0.1128322790075547, 1e-12));
    CHECK_THAT(sb.b, WithinRel(0.20423715719350286, 1e-12));
    CHECK(sb.effective == std::min(sb.a, sb.b));
    // exponent of b is mu(rho-R)^2 - u = 2.15 > 0, so b -> 0 both ways
    CHECK(bound_stagger(p, 50.0).b < 1e-40);
    CHECK(bound_stagger(p, 1e-12).b < 1e-5);
}

TEST_CASE("beta_star values", "[bounds]") {
    CHECK_THAT(beta_star(10.0), WithinRel(0.046051701859880924, 1e-12));
    CHECK_THAT(beta_star(std::exp(1.0)), WithinRel(0.2706705664732254, 1e-12));
    double prev = beta_star(std::exp(1.0));
    for (double R = 3.0; R < 1e4; R *= 2.3) {
        const double v = beta_star(R);
        CHECK(v < prev);
        prev = v;
    }
    CHECK_THROWS_AS(beta_star(1.0), std::domain_error);
    CHECK_THROWS_AS(beta_star(0.5), std::domain_error);
}

TEST_CASE("crossover solver", "[bounds]") {
    const ModelParams p = preset_params(2.0, 0.1);
    const double bhat = solve_crossover(p);
    CHECK_THAT(bhat, WithinRel(0.37509357921240755, 1e-8));

    // plug back into both sides of the defining equation
    const auto& f = p.profile;
    const double log_lhs =
        std::log(0.5 * f.rho) +
        bhat * (f.U - p.mu * p.R * p.R - 2.0 * p.lambda * f.rho * f.rho);
    const double log_rhs =
        0.5 * std::log(kPi / (bhat * (p.mu + 8.0 * p.lambda))) - bhat * f.u;
    CHECK(std::fabs(log_lhs - log_rhs) <= 1e-8);

    // no crossover when the left exponent cannot catch up
    ModelParams q = p;
    q.profile.U = 1e-3;
    q.profile.U_bar = 1e-3;
    q.profile.u = 1e-4;
    CHECK_THROWS_AS(solve_crossover(q), std::runtime_error);
}

TEST_CASE("all bounds are nonnegative", "[bounds]") {
    const ModelParams p = preset_params(2.0, 0.1);
    for (double b : log_grid(1e-6, 50.0, 40)) {
        const auto r = make_report(p, b);
        CHECK(r.p_gt_bound >= 0.0);
        CHECK(r.p_lt_bound >= 0.0);
        CHECK(r.pair_low_t >= 0.0);
        CHECK(r.pair_high_t >= 0.0);
        CHECK(r.p0_bound >= 0.0);
        CHECK(r.stagger_bound_a >= 0.0);
        CHECK(r.stagger_bound_b >= 0.0);
        CHECK(r.pair_bound == std::min(r.pair_low_t, r.pair_high_t));
        CHECK(r.stagger_bound == std::min(r.stagger_bound_a, r.stagger_bound_b));
    }
    CHECK_THROWS_AS(make_report(p, 0.0), std::domain_error);
}

TEST_CASE("regime verdicts across scales", "[bounds]") {
    const auto grid = log_grid(1e-5, 10.0, 200);

    // Large R: the closing chain holds (beta* drops below the grid, so the
    // high-T leg is vacuous and the low-T leg has huge negative exponents).
    for (double R : {1e4, 1e6}) {
        const auto rep = verify_regime(R, 0.05, grid);
        CHECK(rep.checks.size() == 5);
        CHECK(rep.all_pass());
    }

    // Desk scale: condition (2.12) and the two sup checks hold, the pair
    // chain does not; the report says which.
    const auto desk = verify_regime(2.0, 0.1, grid);
    CHECK(desk.checks[0].pass);
    CHECK_FALSE(desk.checks[1].pass);
    CHECK_FALSE(desk.checks[2].pass);
    CHECK_FALSE(desk.checks[3].pass);
    CHECK(desk.checks[4].pass);
    CHECK_FALSE(desk.all_pass());

    CHECK_THROWS_AS(verify_regime(2.0, 0.1, {}), std::invalid_argument);
    CHECK_THROWS_AS(verify_regime(0.9, 0.1, grid), std::domain_error);
}
