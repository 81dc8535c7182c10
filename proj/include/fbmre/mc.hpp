#pragma once
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "fbmre/grid.hpp"
#include "fbmre/hurst_law.hpp"
#include "fbmre/stats.hpp"

namespace fbmre {

struct GridRule {
    enum class Kind { fixed, paper };
    Kind kind = Kind::paper;
    std::int64_t fixed_m = 1;
    std::int64_t m_min = 1;
    std::int64_t m_max = 4096;

    static GridRule fixed(std::int64_t m) { return {Kind::fixed, m, 1, 4096}; }
    static GridRule paper(std::int64_t m_min = 1, std::int64_t m_max = 4096) {
        return {Kind::paper, 1, m_min, m_max};
    }
};

// Points per unit time: the paper rule ceil(1/sqrt(H))^2 clamped to
// [m_min, m_max], or the fixed override.
std::int64_t grid_points_per_unit(double hurst, const GridRule& rule);

struct McConfig {
    std::int64_t n_paths = 100000;
    std::uint64_t seed = 0;
    GridRule grid_rule{};
    double barrier = 1.0;
    double ci_level = 0.95;
    int workers = 0; // 0 = hardware concurrency
};

struct McEstimate {
    double p_hat = 0.0;
    double std_err = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    std::int64_t n_paths = 0;
    std::int64_t n_hits = 0;
};

// P(max over the grid on [0, T] <= barrier) for a fixed exponent. H = 1 is
// routed to the degenerate linear process. Wilson interval at cfg.ci_level.
McEstimate estimate_persistence_fixed(double hurst, double horizon, const McConfig& cfg);

// Annealed version: per path, draw H from the law, then a path with that H.
McEstimate estimate_persistence_annealed(const HurstLaw& law, double horizon, const McConfig& cfg);

// Annealed P(max over the grid on [0,1] <= epsilon).
McEstimate estimate_small_barrier(const HurstLaw& law, double epsilon, const McConfig& cfg);

// Grid-sharing drivers behind the CLI: one path set at the largest horizon
// serves every grid point via prefix maxima (or barrier thresholds). Each
// entry is exactly the corresponding single-point estimate in law; entries
// are CRN-correlated across the grid.
std::vector<McEstimate> persistence_curve(const HurstLaw& law, std::span<const double> horizons,
                                          const McConfig& cfg);
std::vector<McEstimate> small_barrier_curve(const HurstLaw& law, std::span<const double> epsilons,
                                            const McConfig& cfg);

// Path functionals whose expectations the checks compare against bounds.
struct FunctionalSpec {
    enum class Kind { max01, absmax01, exp_neg_integral, mgf };
    Kind kind = Kind::max01;
    double param = 0.0; // T for exp_neg_integral, theta for mgf

    static FunctionalSpec max01() { return {Kind::max01, 0.0}; }
    static FunctionalSpec absmax01() { return {Kind::absmax01, 0.0}; }
    static FunctionalSpec exp_neg_integral(double t) { return {Kind::exp_neg_integral, t}; }
    static FunctionalSpec mgf(double theta) { return {Kind::mgf, theta}; }
};

// Sample mean with normal-approximation CI. The functional is evaluated on
// the [0,1] grid implied by cfg.grid_rule at the given H.
McEstimate estimate_expectation(const FunctionalSpec& spec, double hurst, const McConfig& cfg);

// Reusable kernel for the verification suite: Monte Carlo moments of
// n_stats per-path statistics of FBM(hurst) on the given grid. Deterministic
// chunked parallelism; identical seeds give identical paths (common random
// numbers across calls).
std::vector<MeanVar> mc_path_statistics(
    double hurst, const GridSpec& grid, std::int64_t n_paths, std::uint64_t seed, int workers,
    int n_stats, const std::function<void(const Path&, std::span<double>)>& fn);

} // namespace fbmre
