#include "fbmre/checks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fbmre/errors.hpp"
#include "fbmre/fgn.hpp"
#include "parallel.hpp"

namespace fbmre {

BoundCheck make_bound_check(std::string name, double lhs, double rhs, double lhs_se) {
    BoundCheck c;
    c.name = std::move(name);
    c.lhs = lhs;
    c.rhs = rhs;
    c.lhs_se = lhs_se;
    c.margin = rhs - lhs;
    c.pass = lhs <= rhs + kSigmaSlack * lhs_se;
    return c;
}

double expected_max_lower_bound(double hurst) {
    return 1.0 / (2.0 * std::sqrt(hurst * std::numbers::pi * std::numbers::e * std::log(2.0)));
}

double expected_max_upper_bound(double hurst) { return 16.3 / std::sqrt(hurst); }

namespace {

std::int64_t surrogate_points(double hurst, const McConfig& cfg) {
    return 16 * grid_points_per_unit(hurst, cfg.grid_rule);
}

} // namespace

std::pair<BoundCheck, BoundCheck> check_expected_max_bounds(double hurst, const McConfig& cfg) {
    const GridSpec grid{1.0, surrogate_points(hurst, cfg)};
    auto fn = [](const Path& p, std::span<double> out) {
        double mx = 0.0;
        for (double v : p.values) mx = std::max(mx, v);
        out[0] = mx;
    };
    const auto mv = mc_path_statistics(hurst, grid, cfg.n_paths, cfg.seed, cfg.workers, 1, fn);
    const double est = mv[0].mean;
    const double se = mv[0].std_err();
    BoundCheck lower = make_bound_check("max_bounds_lower", expected_max_lower_bound(hurst), est, se);
    BoundCheck upper = make_bound_check("max_bounds_upper", est, expected_max_upper_bound(hurst), se);
    return {lower, upper};
}

double mgf_bound_rhs(double hurst, double theta) {
    return 2.0 * std::exp(16.3 * theta / std::sqrt(hurst) + 4.0 * theta * theta);
}

BoundCheck check_mgf_bound(double hurst, double theta, const McConfig& cfg) {
    if (!(theta > 0.0 && theta <= 4.0)) {
        throw ValidationError("check_mgf_bound: need 0 < theta <= 4");
    }
    const GridSpec grid{1.0, surrogate_points(hurst, cfg)};
    auto fn = [theta](const Path& p, std::span<double> out) {
        double mx = 0.0;
        for (double v : p.values) mx = std::max(mx, std::abs(v));
        out[0] = std::exp(theta * mx);
    };
    const auto mv = mc_path_statistics(hurst, grid, cfg.n_paths, cfg.seed, cfg.workers, 1, fn);
    return make_bound_check("mgf_bound", mv[0].mean, mgf_bound_rhs(hurst, theta), mv[0].std_err());
}

double discretization_error_rhs(double hurst, std::int64_t n_grid) {
    return 12.0 * std::sqrt(std::log(static_cast<double>(n_grid))) /
           std::pow(static_cast<double>(n_grid), hurst);
}

BoundCheck check_discretization_error(double hurst, std::int64_t n_grid, const McConfig& cfg) {
    if (std::pow(2.0, 1.0 / hurst) > static_cast<double>(n_grid)) {
        throw PreconditionViolatedError("check_discretization_error: need n >= 2^(1/H)");
    }
    constexpr std::int64_t refine = 16;
    const GridSpec grid{1.0, refine * n_grid};
    // Same paths for both maxima: the coarse grid is a subset of the fine
    // one, so the per-path gap is nonnegative by construction.
    auto fn = [n_grid](const Path& p, std::span<double> out) {
        double fine = 0.0;
        for (double v : p.values) fine = std::max(fine, v);
        double coarse = 0.0; // k = 0 term
        for (std::int64_t k = 1; k <= n_grid; ++k) {
            coarse = std::max(coarse, p.values[static_cast<std::size_t>(k * refine)]);
        }
        out[0] = fine - coarse;
    };
    const auto mv = mc_path_statistics(hurst, grid, cfg.n_paths, cfg.seed, cfg.workers, 1, fn);
    return make_bound_check("discretization_error", mv[0].mean,
                            discretization_error_rhs(hurst, n_grid), mv[0].std_err());
}

SlepianResult check_slepian_monotonicity(double epsilon, std::span<const double> h_grid,
                                         const McConfig& cfg) {
    if (h_grid.empty()) throw ValidationError("check_slepian_monotonicity: empty H grid");
    for (std::size_t i = 1; i < h_grid.size(); ++i) {
        if (!(h_grid[i] > h_grid[i - 1])) {
            throw ValidationError("check_slepian_monotonicity: H grid must be strictly ascending");
        }
    }
    SlepianResult res;
    res.h_grid.assign(h_grid.begin(), h_grid.end());
    for (double h : h_grid) {
        res.estimates.push_back(estimate_small_barrier(HurstLaw::point(h), epsilon, cfg));
    }
    res.pass = true;
    for (std::size_t i = 0; i + 1 < res.estimates.size(); ++i) {
        const McEstimate& lo = res.estimates[i];
        const McEstimate& hi = res.estimates[i + 1];
        if (lo.p_hat > hi.p_hat + kSigmaSlack * (lo.std_err + hi.std_err)) {
            res.violations.push_back(i);
            res.pass = false;
        }
    }
    return res;
}

ExpansionResult check_exp_integral_inverse(double hurst, std::span<const double> t_grid,
                                           const McConfig& cfg) {
    if (t_grid.empty()) throw ValidationError("check_exp_integral_inverse: empty T grid");
    for (double t : t_grid) {
        if (!(t >= 1.0)) throw ValidationError("check_exp_integral_inverse: horizons must be >= 1");
    }
    const std::int64_t m = grid_points_per_unit(hurst, cfg.grid_rule);
    const GridSpec grid{1.0, m};
    const std::size_t nt = t_grid.size();
    std::vector<double> th(nt);
    for (std::size_t j = 0; j < nt; ++j) th[j] = std::pow(t_grid[j], hurst);

    // Per path: M_1 and, for each T, the combined variable whose mean is
    // g(T,H). stats = [g_1..g_nt, M1].
    auto fn = [&](const Path& p, std::span<double> out) {
        double m1 = 0.0;
        for (double v : p.values) m1 = std::max(m1, v);
        for (std::size_t j = 0; j < nt; ++j) {
            const double log_int =
                std::log(t_grid[j]) + log_trapezoid_exp(p.values, p.grid.step(), th[j]);
            const double inv = std::exp(-log_int);
            const double t = t_grid[j];
            out[j] = (inv - 1.0 / t) / (hurst * std::pow(t, hurst - 1.0)) - m1;
        }
        out[nt] = m1;
    };
    const auto mv = mc_path_statistics(hurst, grid, cfg.n_paths, cfg.seed, cfg.workers,
                                       static_cast<int>(nt) + 1, fn);
    ExpansionResult res;
    res.hurst = hurst;
    res.expected_max = mv[nt].mean;
    for (std::size_t j = 0; j < nt; ++j) {
        res.rows.push_back({t_grid[j], mv[j].mean, mv[j].std_err()});
    }
    const double z = normal_quantile(0.5 + 0.5 * cfg.ci_level);
    const auto& first = res.rows.front();
    const auto& last = res.rows.back();
    res.pass = std::abs(first.g_hat) - std::abs(last.g_hat) >
               z * (first.std_err + last.std_err);
    return res;
}

std::int64_t count_records_scan(std::span<const double> values, std::int64_t n) {
    const std::int64_t len = static_cast<std::int64_t>(values.size()); // v_1..v_L
    const std::int64_t n2 = n * n;
    std::int64_t count = 0;
    double suffix_max = values[static_cast<std::size_t>(len - 1)];
    for (std::int64_t m = len - 1; m >= 1; --m) {
        const double vm = values[static_cast<std::size_t>(m - 1)];
        if (m <= n2 && suffix_max < vm) ++count;
        suffix_max = std::max(suffix_max, vm);
    }
    return count;
}

RecordStats count_right_to_left_records(double hurst, std::int64_t n, const McConfig& cfg) {
    if (n < 2) throw ValidationError("count_right_to_left_records: need n >= 2");
    const std::int64_t len = n + n * n;
    if (len > kRecordPathCap) {
        throw SizeExceededError("count_right_to_left_records: path length " + std::to_string(len) +
                                " exceeds cap " + std::to_string(kRecordPathCap));
    }
    const GridSpec grid{static_cast<double>(len), 1};
    auto fn = [n, len](const Path& p, std::span<double> out) {
        std::span<const double> v(p.values.data() + 1, static_cast<std::size_t>(len));
        const double records = static_cast<double>(count_records_scan(v, n));
        double sn = v[0];
        for (std::int64_t k = 1; k < n; ++k) sn = std::max(sn, v[static_cast<std::size_t>(k)]);
        const double indicator = sn < 0.0 ? 1.0 : 0.0;
        out[0] = records;
        out[1] = indicator;
        out[2] = static_cast<double>(n * n) * indicator - records; // CRN difference
    };
    const auto mv = mc_path_statistics(hurst, grid, cfg.n_paths, cfg.seed, cfg.workers, 3, fn);

    RecordStats rs;
    rs.n = n;
    const double z = normal_quantile(0.5 + 0.5 * cfg.ci_level);
    rs.expected_records.p_hat = mv[0].mean;
    rs.expected_records.std_err = mv[0].std_err();
    rs.expected_records.ci_lo = mv[0].mean - z * rs.expected_records.std_err;
    rs.expected_records.ci_hi = mv[0].mean + z * rs.expected_records.std_err;
    rs.expected_records.n_paths = cfg.n_paths;

    const std::int64_t hits = static_cast<std::int64_t>(std::llround(mv[1].mean * static_cast<double>(cfg.n_paths)));
    rs.persistence_n2.p_hat = mv[1].mean;
    rs.persistence_n2.std_err = std::sqrt(mv[1].mean * (1.0 - mv[1].mean) / static_cast<double>(cfg.n_paths));
    const Interval ci = wilson_interval(hits, cfg.n_paths, cfg.ci_level);
    rs.persistence_n2.ci_lo = ci.lo;
    rs.persistence_n2.ci_hi = ci.hi;
    rs.persistence_n2.n_paths = cfg.n_paths;
    rs.persistence_n2.n_hits = hits;

    // n^2 P(S_n < 0) >= E[records]: the difference variable keeps the slack
    // honest under common random numbers.
    rs.inequality = make_bound_check("record_times", rs.expected_records.p_hat,
                                     static_cast<double>(n * n) * rs.persistence_n2.p_hat,
                                     mv[2].std_err());
    return rs;
}

BoundCheck check_negative_barrier_bound(double hurst, std::int64_t n, std::int64_t m,
                                        const McConfig& cfg) {
    if (n < 2) throw ValidationError("check_negative_barrier_bound: need n >= 2");
    const GridSpec grid{static_cast<double>(n), m};
    auto fn = [n, m](const Path& p, std::span<double> out) {
        double mx = -1e300;
        for (std::int64_t k = 0; k <= (n - 1) * m; ++k) {
            mx = std::max(mx, p.values[static_cast<std::size_t>(m + k)]);
        }
        out[0] = mx <= -1.0 ? 1.0 : 0.0;
    };
    const auto lhs_mv = mc_path_statistics(hurst, grid, cfg.n_paths, cfg.seed, cfg.workers, 1, fn);

    McConfig max_cfg = cfg;
    max_cfg.grid_rule = GridRule::fixed(512); // 16x surrogate = 8192 points on [0,1]
    const McEstimate emax = estimate_expectation(FunctionalSpec::max01(), hurst, max_cfg);

    const double factor = 4.0 * std::pow(static_cast<double>(n), hurst - 1.0) /
                          static_cast<double>(m);
    const double rhs = factor * emax.p_hat;
    const double combined_se = lhs_mv[0].std_err() + factor * emax.std_err;
    return make_bound_check("negative_barrier", lhs_mv[0].mean, rhs, combined_se);
}

BzCovariance bz_comparison_cov(double hurst, std::int64_t n, std::int64_t k, std::int64_t l) {
    if (k < 1 || l < 1 || k > n || l > n) {
        throw std::domain_error("bz_comparison_cov: need 1 <= k,l <= n");
    }
    const double h2 = 2.0 * hurst;
    const double tk = static_cast<double>(k) / static_cast<double>(n);
    const double tl = static_cast<double>(l) / static_cast<double>(n);
    BzCovariance out;
    out.analytic_fbm = 0.5 * (std::pow(tk, h2) + std::pow(tl, h2) -
                              std::pow(std::abs(tk - tl), h2));
    out.analytic_x = (k == l) ? std::pow(tk, h2)
                              : 0.5 * std::min(std::pow(tk, h2), std::pow(tl, h2));
    return out;
}

BoundCheck check_covariance_comparison(double hurst, std::int64_t n) {
    double worst = -1e300; // max of Cov_X - Cov_fbm over pairs; must stay <= 0
    double worst_var_gap = 0.0;
    for (std::int64_t k = 1; k <= n; ++k) {
        for (std::int64_t l = 1; l <= n; ++l) {
            const BzCovariance c = bz_comparison_cov(hurst, n, k, l);
            if (k == l) {
                worst_var_gap = std::max(worst_var_gap, std::abs(c.analytic_fbm - c.analytic_x));
            } else {
                worst = std::max(worst, c.analytic_x - c.analytic_fbm);
            }
        }
    }
    BoundCheck c = make_bound_check("covariance_comparison", std::max(worst, worst_var_gap), 1e-12, 0.0);
    return c;
}

std::pair<double, double> extreme_value_constants(std::int64_t n) {
    if (n < 3) throw std::domain_error("extreme_value_constants: need n >= 3");
    const double ln_n = std::log(static_cast<double>(n));
    const double root = std::sqrt(2.0 * ln_n);
    const double a_n = 1.0 / root;
    const double b_n = root - (std::log(ln_n) + std::log(4.0 * std::numbers::pi)) / (2.0 * root);
    return {a_n, b_n};
}

BoundCheck check_extreme_value(std::int64_t n, const McConfig& cfg) {
    const auto [a_n, b_n] = extreme_value_constants(n);
    (void)a_n;
    const double exact = std::pow(normal_cdf(b_n), static_cast<double>(n));

    const std::int64_t n_chunks = (cfg.n_paths + kChunkSize - 1) / kChunkSize;
    std::vector<std::int64_t> chunk_hits(static_cast<std::size_t>(n_chunks), 0);
    run_chunks(n_chunks, cfg.workers, [&](std::int64_t chunk) {
        NormalRng rng(substream_seed(cfg.seed, StreamDomain::path, static_cast<std::uint64_t>(chunk)));
        const std::int64_t begin = chunk * kChunkSize;
        const std::int64_t end = std::min(cfg.n_paths, begin + kChunkSize);
        std::int64_t hits = 0;
        for (std::int64_t p = begin; p < end; ++p) {
            bool below = true;
            for (std::int64_t i = 0; i < n; ++i) {
                if (rng.next_normal() > b_n) {
                    below = false;
                    // keep consuming so the stream layout is data-independent
                }
            }
            if (below) ++hits;
        }
        chunk_hits[static_cast<std::size_t>(chunk)] = hits;
    });
    std::int64_t hits = 0;
    for (auto h : chunk_hits) hits += h;
    const double p_hat = static_cast<double>(hits) / static_cast<double>(cfg.n_paths);
    const double se = std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(cfg.n_paths));
    return make_bound_check("extreme_value_n" + std::to_string(n), std::abs(p_hat - exact), 0.0, se);
}

MillsResult mills_ratio_check(std::span<const double> x_grid) {
    MillsResult res;
    res.x_grid.assign(x_grid.begin(), x_grid.end());
    res.pass = true;
    res.worst_margin = 1e300;
    constexpr double tol = 1e-9;
    for (double x : x_grid) {
        if (x < 0.0) throw std::domain_error("mills_ratio_check: grid must be nonnegative");
        const double tail = normal_cdf(-x);
        const double dens = normal_pdf(x);
        if (x > 0.0) {
            const double lower = dens / (x + 1.0 / x);
            const double upper = dens / x;
            res.worst_margin = std::min({res.worst_margin, tail - lower, upper - tail});
            if (tail - lower < -tol || upper - tail < -tol) res.pass = false;
        } else {
            // x = 0: the lower bound degenerates to 0 <= 1/2; the upper bound
            // is excluded (division by zero).
            res.worst_margin = std::min(res.worst_margin, tail);
        }
    }
    return res;
}

RkhsQuantities rkhs_shift_quantities(double hurst, std::int64_t n, std::int64_t m) {
    if (n < 1 || m < 1) throw std::domain_error("rkhs_shift_quantities: need n, m >= 1");
    const std::int64_t points = (n - 1) * m + 1;
    if (points > kRkhsMaxPoints) {
        throw SizeExceededError("rkhs_shift_quantities: dense grid too large");
    }
    const double h2 = 2.0 * hurst;
    auto kernel_1t = [h2](double t) {
        return 0.5 * (1.0 + std::pow(t, h2) - std::pow(std::abs(t - 1.0), h2));
    };
    double kappa = 1e300;
    for (std::int64_t k = 0; k < points; ++k) {
        const double t = 1.0 + static_cast<double>(k) / static_cast<double>(m);
        kappa = std::min(kappa, kernel_1t(t));
    }
    RkhsQuantities q;
    q.kappa = kappa;
    double f_min = 1e300;
    for (std::int64_t k = 0; k < points; ++k) {
        const double t = 1.0 + static_cast<double>(k) / static_cast<double>(m);
        f_min = std::min(f_min, 2.0 * kernel_1t(t) / kappa);
    }
    q.f_min = f_min;
    q.f_norm_sq = (2.0 / kappa) * (2.0 / kappa) * kernel_1t(1.0);
    q.pass = kappa >= 0.5 - 1e-12 && q.f_min >= 2.0 - 1e-12 && q.f_norm_sq <= 16.0 + 1e-9;
    return q;
}

MonotonicityProbe probe_monotonicity_conjecture(double horizon, std::span<const double> h_grid,
                                                const McConfig& cfg) {
    if (!(horizon >= 1.0)) {
        throw ValidationError("probe_monotonicity_conjecture: horizon must be >= 1");
    }
    for (std::size_t i = 1; i < h_grid.size(); ++i) {
        if (!(h_grid[i] > h_grid[i - 1])) {
            throw ValidationError("probe_monotonicity_conjecture: H grid must be ascending");
        }
    }
    MonotonicityProbe probe;
    probe.horizon = horizon;
    for (double h : h_grid) {
        probe.rows.push_back({h, estimate_persistence_fixed(h, horizon, cfg)});
    }
    for (std::size_t i = 0; i + 1 < probe.rows.size(); ++i) {
        const McEstimate& lo = probe.rows[i].estimate;
        const McEstimate& hi = probe.rows[i + 1].estimate;
        if (hi.p_hat < lo.p_hat - kSigmaSlack * (lo.std_err + hi.std_err)) {
            probe.findings.push_back(i);
        }
    }
    return probe;
}

} // namespace fbmre
