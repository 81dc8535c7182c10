#pragma once
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace fbmre {

// Uniform grid {k/m : k = 0..n_points} covering [0, T]. The last grid time
// lies in [T, T + 1/m).
struct GridSpec {
    double horizon = 1.0;                 // T
    std::int64_t points_per_unit = 1;     // m

    std::int64_t n_points() const {
        return static_cast<std::int64_t>(std::ceil(horizon * static_cast<double>(points_per_unit) - 1e-9));
    }
    double step() const { return 1.0 / static_cast<double>(points_per_unit); }
    double time_at(std::int64_t k) const { return static_cast<double>(k) * step(); }
};

// A sampled trajectory on a GridSpec. values has length n_points()+1 and
// values[0] == 0.
struct Path {
    double hurst = 0.5;
    GridSpec grid;
    std::vector<double> values;
};

struct PathFunctionals {
    double max = 0.0;          // max of the path over grid times <= sub-horizon
    double abs_max = 0.0;      // same for |path|
    double exp_integral = 0.0; // trapezoid value of the integral of exp(path)
};

// Functionals over grid points with time <= sub_horizon.
PathFunctionals path_functionals(const Path& path, double sub_horizon);

// ln of the trapezoid value of the integral of exp(scale * values) over a
// uniform grid with the given step, computed with a max shift so large
// exponents cannot overflow. Requires scale >= 0 and at least two values.
double log_trapezoid_exp(std::span<const double> values, double step, double scale);

} // namespace fbmre
