#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "fbmre/checks.hpp"
#include "fbmre/errors.hpp"
#include "oracles.hpp"

using namespace fbmre;

namespace {

McConfig cfg_with(std::int64_t n_paths, std::uint64_t seed, GridRule rule = GridRule::paper()) {
    McConfig cfg;
    cfg.n_paths = n_paths;
    cfg.seed = seed;
    cfg.grid_rule = rule;
    return cfg;
}

} // namespace

TEST_CASE("expected-max bound formulas") {
    CHECK(expected_max_lower_bound(0.5) == doctest::Approx(0.2906418).epsilon(1e-5));
    CHECK(expected_max_upper_bound(0.5) == doctest::Approx(23.0516).epsilon(1e-4));
    CHECK(expected_max_lower_bound(0.9) == doctest::Approx(0.2166216).epsilon(1e-5));
    CHECK(expected_max_upper_bound(0.9) == doctest::Approx(17.1816).epsilon(1e-4));
    // Lower < upper for every H: the ratio reduces to a constant comparison.
    for (double h = 0.01; h < 1.0; h += 0.01) {
        CHECK(expected_max_lower_bound(h) < expected_max_upper_bound(h));
    }
}

TEST_CASE("expected-max bounds hold at H=0.5 with a closed-form cross-check") {
    McConfig cfg = cfg_with(20'000, 42, GridRule::fixed(512));
    const auto [lower, upper] = check_expected_max_bounds(0.5, cfg);
    CHECK(lower.pass);
    CHECK(upper.pass);
    // The estimate sits between the bounds, near sqrt(2/pi).
    CHECK(upper.lhs == doctest::Approx(std::sqrt(2.0 / std::numbers::pi)).epsilon(0.02));
}

TEST_CASE("mgf bound formula and check") {
    // theta -> 0: rhs -> 2, lhs -> 1.
    CHECK(mgf_bound_rhs(0.5, 1e-12) == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(mgf_bound_rhs(0.5, 1.0) ==
          doctest::Approx(2.0 * std::exp(16.3 / std::sqrt(0.5) + 4.0)).epsilon(1e-12));
    McConfig cfg = cfg_with(20'000, 43, GridRule::fixed(256));
    const BoundCheck b = check_mgf_bound(0.5, 1.0, cfg);
    CHECK(b.pass);
    CHECK(b.lhs < 20.0); // E[e^{A_1}] is O(10) while the bound is ~2e12
    CHECK(b.rhs > 1e10);
    CHECK_THROWS_AS(check_mgf_bound(0.5, 5.0, cfg), ValidationError);
}

TEST_CASE("discretization error precondition and trivial equality case") {
    McConfig cfg = cfg_with(5'000, 44);
    CHECK_THROWS_AS(check_discretization_error(0.5, 3, cfg), PreconditionViolatedError);
    CHECK(discretization_error_rhs(0.5, 16) ==
          doctest::Approx(12.0 * std::sqrt(std::log(16.0)) / 4.0).epsilon(1e-12));
    const BoundCheck b = check_discretization_error(0.5, 16, cfg);
    CHECK(b.pass);
    CHECK(b.lhs >= 0.0); // gap is pathwise nonnegative, so its mean is too
    CHECK(b.lhs < 0.5);  // observed gap is far below the generous bound
}

TEST_CASE("record scan equals brute force on random arrays") {
    std::mt19937_64 gen(2025);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_int_distribution<std::int64_t> pick_n(2, 12);
    for (int rep = 0; rep < 200; ++rep) {
        const std::int64_t n = pick_n(gen);
        const std::int64_t len = n + n * n;
        std::vector<double> v(static_cast<std::size_t>(len));
        double acc = 0.0;
        for (auto& x : v) {
            acc += normal(gen);
            x = acc;
        }
        CHECK(count_records_scan(v, n) == oracles::brute_force_records(v, n));
    }
}

TEST_CASE("record scan on monotone stubs") {
    const std::int64_t n = 4;
    std::vector<double> inc, dec;
    for (std::int64_t k = 1; k <= n + n * n; ++k) {
        inc.push_back(static_cast<double>(k));
        dec.push_back(-static_cast<double>(k));
    }
    // Increasing path: the suffix max always dominates, no records.
    CHECK(count_records_scan(inc, n) == 0);
    // Decreasing path: every m in 1..n^2 is a record.
    CHECK(count_records_scan(dec, n) == n * n);
}

TEST_CASE("record inequality holds at H=0.5, n=12 (reduced size)") {
    McConfig cfg = cfg_with(20'000, 45);
    const RecordStats rs = count_right_to_left_records(0.5, 12, cfg);
    CHECK(rs.inequality.pass);
    CHECK(rs.expected_records.p_hat > 0.0);
    CHECK(rs.persistence_n2.p_hat > 0.0);
    // Closed-form sanity for the Brownian case: P(max of 12 steps < 0) is
    // C(24,12)/4^12 ~ 0.1612 by the discrete arcsine law.
    CHECK(std::abs(rs.persistence_n2.p_hat - 0.16118) < 5.0 * rs.persistence_n2.std_err);
    CHECK_THROWS_AS(count_right_to_left_records(0.5, 150, cfg), SizeExceededError);
    CHECK_THROWS_AS(count_right_to_left_records(0.5, 1, cfg), ValidationError);
}

TEST_CASE("negative barrier bound at the bivariate point") {
    McConfig cfg = cfg_with(100'000, 46);
    const BoundCheck b = check_negative_barrier_bound(0.5, 2, 1, cfg);
    CHECK(b.pass);
    // lhs is P(B_1 <= -1, B_2 <= -1): bivariate normal with correlation
    // 1/sqrt(2) after standardizing.
    const double exact = oracles::bivariate_normal_cdf(-1.0, -1.0 / std::sqrt(2.0),
                                                       1.0 / std::sqrt(2.0));
    CHECK(exact == doctest::Approx(0.108068).epsilon(1e-3));
    CHECK(std::abs(b.lhs - exact) < 5.0 * std::sqrt(exact * (1 - exact) / 100'000.0));
    CHECK(b.rhs == doctest::Approx(4.0 / std::sqrt(2.0) * 0.7979 / 1.0).epsilon(0.05));
}

TEST_CASE("bz covariance formulas and exhaustive comparison") {
    // k = l: both variances equal (k/n)^{2H}, exactly.
    for (double h : {0.3, 0.5, 0.9}) {
        const BzCovariance d = bz_comparison_cov(h, 8, 3, 3);
        CHECK(d.analytic_fbm == doctest::Approx(std::pow(3.0 / 8.0, 2.0 * h)).epsilon(1e-14));
        CHECK(d.analytic_x == doctest::Approx(d.analytic_fbm).epsilon(1e-14));
    }
    // Hand evaluation at H=0.5, k=1, l=2, n=2.
    const BzCovariance c = bz_comparison_cov(0.5, 2, 1, 2);
    CHECK(c.analytic_fbm == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(c.analytic_x == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(c.analytic_fbm >= c.analytic_x);
    // Exhaustive grids.
    for (double h : {0.3, 0.5, 0.9}) {
        CHECK(check_covariance_comparison(h, 64).pass);
    }
    CHECK_THROWS_AS(bz_comparison_cov(0.5, 4, 0, 2), std::domain_error);
}

TEST_CASE("extreme value constants") {
    const auto [a16, b16] = extreme_value_constants(16);
    CHECK(a16 == doctest::Approx(1.0 / std::sqrt(2.0 * std::log(16.0))).epsilon(1e-12));
    CHECK(a16 == doctest::Approx(0.424662).epsilon(1e-5));
    CHECK(b16 == doctest::Approx(std::sqrt(2.0 * std::log(16.0)) -
                                 (std::log(std::log(16.0)) + std::log(4.0 * std::numbers::pi)) /
                                     (2.0 * std::sqrt(2.0 * std::log(16.0))))
                     .epsilon(1e-12));
    CHECK_THROWS_AS(extreme_value_constants(2), std::domain_error);
    // Gumbel at x = 0.
    CHECK(std::exp(-std::exp(-0.0)) == doctest::Approx(std::exp(-1.0)));

    McConfig cfg = cfg_with(50'000, 47);
    const BoundCheck b = check_extreme_value(1000, cfg);
    CHECK(b.pass);
}

TEST_CASE("mills ratio inequalities") {
    const double xs[] = {0.0, 0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0};
    const MillsResult r = mills_ratio_check(xs);
    CHECK(r.pass);
    CHECK(r.worst_margin >= -1e-9);
    // Spot values at x = 1.
    CHECK(oracles::phi(1.0) / 2.0 == doctest::Approx(0.120985).epsilon(1e-4));
    CHECK(oracles::Phi(-1.0) == doctest::Approx(0.158655).epsilon(1e-4));
    CHECK(oracles::phi(1.0) == doctest::Approx(0.241971).epsilon(1e-4));
    CHECK_THROWS_AS(mills_ratio_check(std::vector<double>{-1.0}), std::domain_error);
}

TEST_CASE("rkhs shift quantities") {
    // H=0.5: K(1,t) = 1 for every t >= 1, so kappa = 1 and the norm is 4.
    const RkhsQuantities q = rkhs_shift_quantities(0.5, 4, 2);
    CHECK(q.kappa == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(q.f_min == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(q.f_norm_sq == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(q.pass);
    // H=0.8, n=8, m=1: minimum at t=1 is K(1,1)=1; all assertions hold.
    const RkhsQuantities q8 = rkhs_shift_quantities(0.8, 8, 1);
    CHECK(q8.kappa >= 0.5 - 1e-12);
    CHECK(q8.f_min >= 2.0 - 1e-12);
    CHECK(q8.f_norm_sq <= 16.0 + 1e-9);
    CHECK(q8.pass);
    // Small H approaches the K -> 1/2 regime from above.
    const RkhsQuantities q1 = rkhs_shift_quantities(0.1, 64, 2);
    CHECK(q1.kappa >= 0.5 - 1e-12);
    CHECK(q1.kappa < 0.6);
    CHECK(q1.pass);
    CHECK_THROWS_AS(rkhs_shift_quantities(0.5, 1 << 22, 2), SizeExceededError);
}

TEST_CASE("slepian monotonicity on a single-element grid passes trivially") {
    McConfig cfg = cfg_with(2'000, 48, GridRule::fixed(64));
    const double hs[] = {0.5};
    const SlepianResult r = check_slepian_monotonicity(0.5, hs, cfg);
    CHECK(r.pass);
    CHECK(r.violations.empty());
    const double bad[] = {0.5, 0.4};
    CHECK_THROWS_AS(check_slepian_monotonicity(0.5, bad, cfg), ValidationError);
}

TEST_CASE("slepian monotonicity with a huge barrier is degenerate") {
    McConfig cfg = cfg_with(1'000, 49, GridRule::fixed(64));
    const double hs[] = {0.3, 0.5, 0.7};
    const SlepianResult r = check_slepian_monotonicity(50.0, hs, cfg);
    CHECK(r.pass);
    for (const auto& est : r.estimates) CHECK(est.p_hat > 0.99);
}

TEST_CASE("expansion error term is finite at T=1 and the variable is exact on stubs") {
    // A constant-zero path makes the integral exactly T, so the combined
    // variable reduces to ((1/T - 1/T) / (H T^{H-1})) - 0 = 0.
    Path zero;
    zero.hurst = 0.5;
    zero.grid = GridSpec{1.0, 4};
    zero.values.assign(5, 0.0);
    const double t = 4.0;
    const double log_int = std::log(t) + log_trapezoid_exp(zero.values, zero.grid.step(),
                                                           std::pow(t, zero.hurst));
    const double inv = std::exp(-log_int);
    const double z = (inv - 1.0 / t) / (zero.hurst * std::pow(t, zero.hurst - 1.0));
    CHECK(z == doctest::Approx(0.0).epsilon(1e-12));

    McConfig cfg = cfg_with(5'000, 50, GridRule::fixed(512));
    const double ts[] = {1.0, 4.0};
    const ExpansionResult r = check_exp_integral_inverse(0.5, ts, cfg);
    CHECK(std::isfinite(r.rows[0].g_hat));
    CHECK(std::isfinite(r.rows[1].g_hat));
}

TEST_CASE("monotonicity probe emits a row per exponent and never fails") {
    McConfig cfg = cfg_with(2'000, 51, GridRule::fixed(16));
    const double hs[] = {0.5};
    const MonotonicityProbe probe = probe_monotonicity_conjecture(4.0, hs, cfg);
    CHECK(probe.rows.size() == 1);
    CHECK(probe.rows[0].estimate.p_hat >= 0.0);
}
