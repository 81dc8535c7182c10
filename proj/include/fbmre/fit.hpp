#pragma once
#include <cstdint>
#include <span>
#include <vector>

#include "fbmre/hurst_law.hpp"

namespace fbmre {

struct FitPoint {
    double x = 0.0;       // T or epsilon
    double p_hat = 0.0;   // must be positive
    double std_err = 0.0;
};

struct ExponentFit {
    double slope = 0.0;
    double slope_se = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::int64_t n_points = 0;
};

// Weighted least squares of ln(p_hat) on ln(x). Weights are 1/var(ln p_hat)
// with var(ln p_hat) ~ (std_err/p_hat)^2 by the delta method. Points are
// summed in ascending-x order so the result is bit-reproducible for any
// input permutation. Throws DegenerateDesignError for fewer than three
// points or coincident x values.
ExponentFit fit_exponent(std::span<const FitPoint> points);

// The predicted positive decay exponents: 1-h for fixed H, 1-H0 annealed,
// (1-H0)/H0 for the small-barrier regime.
struct PredictedExponent {
    enum class Kind { fixed_h, annealed, small_barrier };
    Kind kind = Kind::fixed_h;
    double h = 0.5;
    HurstLaw law = HurstLaw::point(0.5);

    static PredictedExponent fixed_h(double h);
    static PredictedExponent annealed(HurstLaw law);
    static PredictedExponent small_barrier(HurstLaw law);
};

double predicted_exponent(const PredictedExponent& kind);

} // namespace fbmre
