#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "fbmre/errors.hpp"
#include "fbmre/fit.hpp"

using namespace fbmre;

TEST_CASE("exact power law is recovered exactly") {
    std::vector<FitPoint> pts;
    for (double x : {16.0, 64.0, 256.0}) {
        pts.push_back({x, std::pow(x, -0.5), 0.0});
    }
    const ExponentFit fit = fit_exponent(pts);
    CHECK(fit.slope == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit.n_points == 3);
}

TEST_CASE("slightly perturbed power law lands near the true slope") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> u(-0.01, 0.01);
    std::vector<FitPoint> pts;
    for (double x : {4.0, 16.0, 64.0, 256.0, 1024.0}) {
        const double p = 2.0 / x * (1.0 + u(gen));
        pts.push_back({x, p, 0.005 * p});
    }
    const ExponentFit fit = fit_exponent(pts);
    CHECK(fit.slope > -1.02);
    CHECK(fit.slope < -0.98);
}

TEST_CASE("weights pull the fit toward low-variance points") {
    // Two precise points on slope -1 plus one wild high-variance outlier.
    std::vector<FitPoint> pts = {
        {10.0, 0.1, 1e-5},
        {100.0, 0.01, 1e-6},
        {1000.0, 0.01, 0.009}, // would flatten the slope if trusted
    };
    const ExponentFit weighted = fit_exponent(pts);
    std::vector<FitPoint> flat = pts;
    for (auto& p : flat) p.std_err = 0.0;
    const ExponentFit unweighted = fit_exponent(flat);
    CHECK(std::abs(weighted.slope - (-1.0)) < std::abs(unweighted.slope - (-1.0)));
}

TEST_CASE("affine equivariance: scaling p moves only the intercept") {
    std::vector<FitPoint> pts = {
        {2.0, 0.31, 0.01}, {8.0, 0.17, 0.008}, {32.0, 0.090, 0.004}, {128.0, 0.047, 0.002}};
    const ExponentFit base = fit_exponent(pts);
    std::vector<FitPoint> scaled = pts;
    for (auto& p : scaled) {
        p.p_hat *= 3.0;
        p.std_err *= 3.0; // same relative error, so same weights
    }
    const ExponentFit moved = fit_exponent(scaled);
    CHECK(std::abs(moved.slope - base.slope) < 1e-12);
    CHECK(std::abs(moved.intercept - (base.intercept + std::log(3.0))) < 1e-12);
    CHECK(std::abs(moved.r_squared - base.r_squared) < 1e-12);
}

TEST_CASE("permutation invariance is bit-exact") {
    std::vector<FitPoint> pts = {
        {2.0, 0.31, 0.01}, {8.0, 0.17, 0.008}, {32.0, 0.090, 0.004}, {128.0, 0.047, 0.002}};
    const ExponentFit base = fit_exponent(pts);
    std::vector<FitPoint> shuffled = {pts[2], pts[0], pts[3], pts[1]};
    const ExponentFit same = fit_exponent(shuffled);
    CHECK(base.slope == same.slope);
    CHECK(base.intercept == same.intercept);
    CHECK(base.slope_se == same.slope_se);
    CHECK(base.r_squared == same.r_squared);
}

TEST_CASE("degenerate designs are rejected") {
    CHECK_THROWS_AS(fit_exponent(std::vector<FitPoint>{{1.0, 0.5, 0.0}, {2.0, 0.4, 0.0}}),
                    DegenerateDesignError);
    CHECK_THROWS_AS(fit_exponent(std::vector<FitPoint>{
                        {2.0, 0.5, 0.0}, {2.0, 0.4, 0.0}, {4.0, 0.3, 0.0}}),
                    DegenerateDesignError);
    CHECK_THROWS_AS(fit_exponent(std::vector<FitPoint>{
                        {2.0, 0.5, 0.0}, {4.0, 0.0, 0.0}, {8.0, 0.3, 0.0}}),
                    DegenerateDesignError);
}

TEST_CASE("predicted exponents") {
    CHECK(predicted_exponent(PredictedExponent::fixed_h(0.5)) == doctest::Approx(0.5));
    CHECK(predicted_exponent(PredictedExponent::annealed(HurstLaw::uniform(0.4, 0.8))) ==
          doctest::Approx(0.2));
    CHECK(predicted_exponent(PredictedExponent::small_barrier(HurstLaw::point(0.5))) ==
          doctest::Approx(1.0));
    CHECK(predicted_exponent(PredictedExponent::small_barrier(HurstLaw::point(0.8))) ==
          doctest::Approx(0.25));
    CHECK(predicted_exponent(PredictedExponent::fixed_h(1.0)) == doctest::Approx(0.0));
}
