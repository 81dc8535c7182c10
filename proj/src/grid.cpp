#include "fbmre/grid.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>

namespace fbmre {

PathFunctionals path_functionals(const Path& path, double sub_horizon) {
    if (sub_horizon < 0.0) {
        throw std::domain_error("path_functionals: sub_horizon must be nonnegative");
    }
    const std::int64_t n = static_cast<std::int64_t>(path.values.size()) - 1;
    std::int64_t kmax = static_cast<std::int64_t>(
        std::floor(sub_horizon * static_cast<double>(path.grid.points_per_unit) + 1e-9));
    kmax = std::min(kmax, n);

    PathFunctionals f;
    f.max = path.values[0];
    f.abs_max = std::abs(path.values[0]);
    const double h = path.grid.step();
    double integral = 0.0;
    double prev = std::exp(path.values[0]);
    for (std::int64_t k = 1; k <= kmax; ++k) {
        const double v = path.values[static_cast<std::size_t>(k)];
        f.max = std::max(f.max, v);
        f.abs_max = std::max(f.abs_max, std::abs(v));
        const double cur = std::exp(v);
        integral += 0.5 * (prev + cur) * h;
        prev = cur;
    }
    f.exp_integral = integral;
    return f;
}

double log_trapezoid_exp(std::span<const double> values, double step, double scale) {
    if (values.size() < 2) {
        throw std::domain_error("log_trapezoid_exp: need at least two grid values");
    }
    if (scale < 0.0) {
        throw std::domain_error("log_trapezoid_exp: scale must be nonnegative");
    }
    double vmax = values[0];
    for (double v : values) vmax = std::max(vmax, v);
    const double shift = scale * vmax;
    double acc = 0.5 * (std::exp(scale * values.front() - shift) +
                        std::exp(scale * values.back() - shift));
    for (std::size_t k = 1; k + 1 < values.size(); ++k) {
        acc += std::exp(scale * values[k] - shift);
    }
    return shift + std::log(acc * step);
}

} // namespace fbmre
