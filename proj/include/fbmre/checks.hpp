#pragma once
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fbmre/mc.hpp"

namespace fbmre {

// One-sided slack for every statistical bound check.
inline constexpr double kSigmaSlack = 4.0;

// lhs <= rhs + kSigmaSlack * lhs_se. lhs_se is the standard error of the
// statistical side of the comparison (0 for exact arithmetic checks).
struct BoundCheck {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double lhs_se = 0.0;
    double margin = 0.0; // rhs - lhs
    bool pass = false;
};

BoundCheck make_bound_check(std::string name, double lhs, double rhs, double lhs_se);

// Bounds on E[max_{[0,1]} B^H]: 1/(2 sqrt(H pi e ln 2)) below, 16.3/sqrt(H)
// above. The estimate uses a grid 16x finer than the one cfg.grid_rule
// implies (continuous-max surrogate).
std::pair<BoundCheck, BoundCheck> check_expected_max_bounds(double hurst, const McConfig& cfg);

double expected_max_lower_bound(double hurst);
double expected_max_upper_bound(double hurst);

// E[e^{theta A_1^H}] <= 2 exp(16.3 theta / sqrt(H) + 4 theta^2).
BoundCheck check_mgf_bound(double hurst, double theta, const McConfig& cfg);
double mgf_bound_rhs(double hurst, double theta);

// E[max continuous surrogate] - E[max over the n-point grid] bounded by
// 12 sqrt(ln n) / n^H, estimated with common random numbers on shared paths.
// Requires n >= 2^{1/H}.
BoundCheck check_discretization_error(double hurst, std::int64_t n_grid, const McConfig& cfg);
double discretization_error_rhs(double hurst, std::int64_t n_grid);

struct SlepianResult {
    std::vector<double> h_grid;
    std::vector<McEstimate> estimates;
    std::vector<std::size_t> violations; // indices i with p(h_i) > p(h_{i+1}) beyond slack
    bool pass = false;
};

// Small-barrier probabilities must be nondecreasing in H (checked pairwise
// with combined-SE slack). All exponents share one grid density so the
// comparison is not confounded by discretization.
SlepianResult check_slepian_monotonicity(double epsilon, std::span<const double> h_grid,
                                         const McConfig& cfg);

struct ExpansionRow {
    double horizon = 0.0;
    double g_hat = 0.0;
    double std_err = 0.0;
};

struct ExpansionResult {
    double hurst = 0.0;
    double expected_max = 0.0; // the direct estimate the expansion is tested against
    std::vector<ExpansionRow> rows;
    bool pass = false; // |g| at the last horizon below |g| at the first, beyond combined CIs
};

// Empirical error term of the expansion
// E[(int_0^T e^{B_s} ds)^{-1}] = (E[M_1] + g(T,H)) H T^{H-1} + T^{-1}:
// g_hat is estimated from a single per-path variable so its CI is exact.
ExpansionResult check_exp_integral_inverse(double hurst, std::span<const double> t_grid,
                                           const McConfig& cfg);

struct RecordStats {
    std::int64_t n = 0;
    McEstimate expected_records;  // mean count of right-to-left records
    McEstimate persistence_n2;    // P(max of first n values < 0)
    BoundCheck inequality;        // n^2 * P >= E[records], CRN slack
};

// Pure scan used by the estimator and by brute-force property tests:
// counts m in 1..n^2 with max(values[m+1..L]) < values[m], where values
// holds v_1..v_L, L = n + n^2.
std::int64_t count_records_scan(std::span<const double> values, std::int64_t n);

RecordStats count_right_to_left_records(double hurst, std::int64_t n, const McConfig& cfg);

// Path-length cap for the record check (unit-step simulation stays cheap).
inline constexpr std::int64_t kRecordPathCap = 20000;

// P(max over {1+k/m} <= -1) <= 4 n^{H-1} E[max_{[0,1]}]/m.
BoundCheck check_negative_barrier_bound(double hurst, std::int64_t n, std::int64_t m,
                                        const McConfig& cfg);

// Covariances of discretized FBM and of the comparison process
// X_k = ((k/n)^H N_k - W_{(k/n)^{2H}})/sqrt(2).
struct BzCovariance {
    double analytic_fbm = 0.0;
    double analytic_x = 0.0;
};
BzCovariance bz_comparison_cov(double hurst, std::int64_t n, std::int64_t k, std::int64_t l);

// Exhaustive pairwise check Cov_fbm >= Cov_X and equal variances on the
// full (k,l) grid; exact arithmetic.
BoundCheck check_covariance_comparison(double hurst, std::int64_t n);

// Normalizing constants of the iid-normal maximum: a_n = 1/sqrt(2 ln n),
// b_n = sqrt(2 ln n) - (ln ln n + ln 4 pi) / (2 sqrt(2 ln n)). n >= 3.
std::pair<double, double> extreme_value_constants(std::int64_t n);

// MC P(max of n iid normals <= b_n) against the exact finite-n value
// Phi(b_n)^n (two-sided, 4 SE).
BoundCheck check_extreme_value(std::int64_t n, const McConfig& cfg);

struct MillsResult {
    std::vector<double> x_grid;
    double worst_margin = 0.0;
    bool pass = false;
};

// phi(x)/(x + 1/x) <= Phi(-x) <= phi(x)/x on the grid (upper bound skipped
// at x = 0), required to hold within 1e-9.
MillsResult mills_ratio_check(std::span<const double> x_grid);

struct RkhsQuantities {
    double kappa = 0.0;      // min over the grid of K(1, t)
    double f_min = 0.0;      // min of f(t) = 2 K(1,t)/kappa
    double f_norm_sq = 0.0;  // (2/kappa)^2 K(1,1)
    bool pass = false;       // kappa >= 1/2, f_min >= 2, norm^2 <= 16 (exact)
};

RkhsQuantities rkhs_shift_quantities(double hurst, std::int64_t n, std::int64_t m);
inline constexpr std::int64_t kRkhsMaxPoints = 1 << 22;

struct ProbeRow {
    double h = 0.0;
    McEstimate estimate;
};

struct MonotonicityProbe {
    double horizon = 0.0;
    std::vector<ProbeRow> rows;
    std::vector<std::size_t> findings; // CI-significant decreases, reported, never failed
};

// Empirical look at H -> P(max_{[0,T]} B^H < 1). Emits the table and flags
// significant non-monotonicities as findings only.
MonotonicityProbe probe_monotonicity_conjecture(double horizon, std::span<const double> h_grid,
                                                const McConfig& cfg);

} // namespace fbmre
