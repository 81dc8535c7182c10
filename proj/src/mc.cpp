#include "fbmre/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <memory>
#include <mutex>
#include <numeric>
#include <stdexcept>

#include "fbmre/errors.hpp"
#include "fbmre/fgn.hpp"
#include "parallel.hpp"

namespace fbmre {

std::int64_t grid_points_per_unit(double hurst, const GridRule& rule) {
    if (!(hurst > 0.0 && hurst <= 1.0)) {
        throw std::domain_error("grid_points_per_unit: hurst must lie in (0,1]");
    }
    if (rule.kind == GridRule::Kind::fixed) return rule.fixed_m;
    const double root = std::ceil(1.0 / std::sqrt(hurst) - 1e-12);
    const std::int64_t m = static_cast<std::int64_t>(root * root);
    return std::clamp(m, rule.m_min, rule.m_max);
}

namespace {

void validate_config(const McConfig& cfg) {
    if (cfg.n_paths < 100) throw ValidationError("McConfig: n_paths must be at least 100");
    if (!(cfg.ci_level > 0.0 && cfg.ci_level < 1.0)) {
        throw ValidationError("McConfig: ci_level must lie in (0,1)");
    }
    if (cfg.grid_rule.kind == GridRule::Kind::fixed) {
        if (cfg.grid_rule.fixed_m < 1) throw ValidationError("McConfig: fixed m must be >= 1");
    } else {
        if (cfg.grid_rule.m_min < 1 || cfg.grid_rule.m_max < cfg.grid_rule.m_min) {
            throw ValidationError("McConfig: need 1 <= m_min <= m_max");
        }
    }
}

enum class SamplerKind { white, plan, degenerate };

// Everything needed to evaluate one drawn exponent over the whole grid of
// horizons: sampler route, scaling, and the cumsum index of each horizon.
struct RouteEntry {
    double h = 0.5;
    std::int64_t m = 1;
    std::int64_t n = 0;
    SamplerKind sampler = SamplerKind::white;
    CirculantPlan plan;
    double scale = 1.0;
    std::vector<std::int64_t> horizon_idx; // ascending
};

RouteEntry make_entry(double h, std::span<const double> horizons_sorted, const GridRule& rule) {
    RouteEntry e;
    e.h = h;
    e.m = grid_points_per_unit(h, rule);
    const double t_max = horizons_sorted.back();
    GridSpec grid{t_max, e.m};
    e.n = grid.n_points();
    e.scale = std::pow(grid.step(), h);
    if (h == 1.0) {
        e.sampler = SamplerKind::degenerate;
    } else if (h == 0.5) {
        e.sampler = SamplerKind::white;
    } else {
        e.sampler = SamplerKind::plan;
        e.plan = build_circulant_plan(h, e.n);
    }
    e.horizon_idx.reserve(horizons_sorted.size());
    for (double t : horizons_sorted) {
        e.horizon_idx.push_back(GridSpec{t, e.m}.n_points());
    }
    return e;
}

// Route table: exact entries for atomic laws, a lazily built 1e-3 lattice
// for continuous ones (plan reuse; the induced exponent perturbation is far
// below Monte Carlo error at these sample sizes).
class RouteTable {
public:
    RouteTable(const HurstLaw& law, std::span<const double> horizons_sorted, const GridRule& rule)
        : horizons_(horizons_sorted.begin(), horizons_sorted.end()), rule_(rule) {
        if (law.is_atomic()) {
            quantized_ = false;
            std::vector<double> hs;
            if (law.kind() == HurstLaw::Kind::point) {
                hs.push_back(law.param_h());
            } else {
                for (const auto& [h, p] : law.atoms()) hs.push_back(h);
            }
            for (double h : hs) {
                atoms_.emplace_back(h, std::make_unique<RouteEntry>(make_entry(h, horizons_, rule_)));
            }
        } else {
            quantized_ = true;
            lat_lo_ = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(law.min_support() * 1000.0)));
            lat_hi_ = std::min<std::int64_t>(999, static_cast<std::int64_t>(std::ceil(law.ess_sup() * 1000.0)));
            lattice_ = std::vector<std::atomic<RouteEntry*>>(static_cast<std::size_t>(lat_hi_ - lat_lo_ + 1));
        }
    }

    const RouteEntry& lookup(double h_drawn) {
        if (!quantized_) {
            for (const auto& [h, e] : atoms_) {
                if (h == h_drawn) return *e;
            }
            throw std::logic_error("RouteTable: drawn atom not in table");
        }
        if (h_drawn == 1.0) {
            return lazy_build(degenerate_, 1.0);
        }
        std::int64_t idx = std::llround(h_drawn * 1000.0);
        idx = std::clamp(idx, lat_lo_, lat_hi_);
        return lazy_build(lattice_[static_cast<std::size_t>(idx - lat_lo_)],
                          static_cast<double>(idx) / 1000.0);
    }

private:

    const RouteEntry& lazy_build(std::atomic<RouteEntry*>& cell, double h) {
        RouteEntry* e = cell.load(std::memory_order_acquire);
        if (e) return *e;
        std::lock_guard<std::mutex> lock(build_mutex_);
        e = cell.load(std::memory_order_relaxed);
        if (!e) {
            auto fresh = std::make_unique<RouteEntry>(make_entry(h, horizons_, rule_));
            e = fresh.get();
            owned_.push_back(std::move(fresh));
            cell.store(e, std::memory_order_release);
        }
        return *e;
    }

    std::vector<double> horizons_;
    GridRule rule_;
    bool quantized_ = false;
    std::vector<std::pair<double, std::unique_ptr<RouteEntry>>> atoms_;
    std::int64_t lat_lo_ = 1, lat_hi_ = 999;
    std::vector<std::atomic<RouteEntry*>> lattice_;
    std::atomic<RouteEntry*> degenerate_{nullptr};
    std::vector<std::unique_ptr<RouteEntry>> owned_;
    std::mutex build_mutex_;
};

// Prefix maxima of the scaled path at each horizon index.
// idx is ascending; out[j] receives max over cumsum positions <= idx[j].
void white_prefix_maxima(NormalRng& rng, std::int64_t n, std::span<const std::int64_t> idx,
                         double scale, std::span<double> out) {
    double acc = 0.0;
    double best = 0.0; // values[0] = 0 participates in every prefix
    std::size_t j = 0;
    while (j < idx.size() && idx[j] <= 0) out[j++] = 0.0;
    for (std::int64_t k = 1; k <= n && j < idx.size(); ++k) {
        acc += rng.next_normal();
        if (acc > best) best = acc;
        while (j < idx.size() && idx[j] == k) out[j++] = best * scale;
    }
}

void fgn_prefix_maxima(const CirculantPlan& plan, NormalRng& rng,
                       std::span<const std::int64_t> idx, double scale, std::span<double> out) {
    thread_local std::vector<double> fgn;
    sample_unit_fgn(plan, rng, fgn);
    double acc = 0.0;
    double best = 0.0;
    std::size_t j = 0;
    while (j < idx.size() && idx[j] <= 0) out[j++] = 0.0;
    const std::int64_t n = plan.n_increments;
    for (std::int64_t k = 1; k <= n && j < idx.size(); ++k) {
        acc += fgn[static_cast<std::size_t>(k - 1)];
        if (acc > best) best = acc;
        while (j < idx.size() && idx[j] == k) out[j++] = best * scale;
    }
}

std::vector<McEstimate> barrier_curve(const HurstLaw& law, std::span<const double> horizons,
                                      double barrier, const McConfig& cfg) {
    validate_config(cfg);
    if (horizons.empty()) throw ValidationError("persistence curve: empty horizon grid");
    for (double t : horizons) {
        if (!(t > 0.0)) throw ValidationError("persistence curve: horizons must be positive");
    }

    // Work in ascending-horizon order, map back at the end.
    std::vector<std::size_t> order(horizons.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return horizons[a] < horizons[b]; });
    std::vector<double> sorted(horizons.size());
    for (std::size_t j = 0; j < order.size(); ++j) sorted[j] = horizons[order[j]];

    RouteTable table(law, sorted, cfg.grid_rule);
    const std::size_t n_pts = sorted.size();
    const std::int64_t n_chunks = (cfg.n_paths + kChunkSize - 1) / kChunkSize;
    std::vector<std::vector<std::int64_t>> chunk_hits(static_cast<std::size_t>(n_chunks));

    run_chunks(n_chunks, cfg.workers, [&](std::int64_t chunk) {
        NormalRng hurst_rng(substream_seed(cfg.seed, StreamDomain::hurst, static_cast<std::uint64_t>(chunk)));
        NormalRng path_rng(substream_seed(cfg.seed, StreamDomain::path, static_cast<std::uint64_t>(chunk)));
        const std::int64_t begin = chunk * kChunkSize;
        const std::int64_t end = std::min(cfg.n_paths, begin + kChunkSize);
        std::vector<std::int64_t> hits(n_pts, 0);
        std::vector<double> prefmax(n_pts);
        for (std::int64_t p = begin; p < end; ++p) {
            const double h = law.sample(hurst_rng);
            const RouteEntry& e = table.lookup(h);
            switch (e.sampler) {
                case SamplerKind::white:
                    white_prefix_maxima(path_rng, e.n, e.horizon_idx, e.scale, prefmax);
                    break;
                case SamplerKind::plan:
                    fgn_prefix_maxima(e.plan, path_rng, e.horizon_idx, e.scale, prefmax);
                    break;
                case SamplerKind::degenerate: {
                    const double xi = path_rng.next_normal();
                    for (std::size_t j = 0; j < n_pts; ++j) {
                        const double t_idx = static_cast<double>(e.horizon_idx[j]) / static_cast<double>(e.m);
                        prefmax[j] = xi > 0.0 ? t_idx * xi : 0.0;
                    }
                    break;
                }
            }
            for (std::size_t j = 0; j < n_pts; ++j) {
                if (prefmax[j] <= barrier) ++hits[j];
            }
        }
        chunk_hits[static_cast<std::size_t>(chunk)] = std::move(hits);
    });

    std::vector<McEstimate> out(n_pts);
    for (std::size_t j = 0; j < n_pts; ++j) {
        std::int64_t hits = 0;
        for (const auto& ch : chunk_hits) hits += ch[j];
        McEstimate est;
        est.n_paths = cfg.n_paths;
        est.n_hits = hits;
        est.p_hat = static_cast<double>(hits) / static_cast<double>(cfg.n_paths);
        est.std_err = std::sqrt(est.p_hat * (1.0 - est.p_hat) / static_cast<double>(cfg.n_paths));
        const Interval ci = wilson_interval(hits, cfg.n_paths, cfg.ci_level);
        est.ci_lo = ci.lo;
        est.ci_hi = ci.hi;
        out[order[j]] = est;
    }
    return out;
}

} // namespace

McEstimate estimate_persistence_fixed(double hurst, double horizon, const McConfig& cfg) {
    if (!(horizon >= 1.0)) {
        throw ValidationError("estimate_persistence_fixed: horizon must be >= 1");
    }
    const double grid[] = {horizon};
    return barrier_curve(HurstLaw::point(hurst), grid, cfg.barrier, cfg)[0];
}

McEstimate estimate_persistence_annealed(const HurstLaw& law, double horizon, const McConfig& cfg) {
    if (!(horizon >= 1.0)) {
        throw ValidationError("estimate_persistence_annealed: horizon must be >= 1");
    }
    const double grid[] = {horizon};
    return barrier_curve(law, grid, cfg.barrier, cfg)[0];
}

McEstimate estimate_small_barrier(const HurstLaw& law, double epsilon, const McConfig& cfg) {
    if (!(epsilon > 0.0)) {
        throw ValidationError("estimate_small_barrier: epsilon must be positive");
    }
    const double grid[] = {1.0};
    McConfig c = cfg;
    c.barrier = epsilon;
    return barrier_curve(law, grid, c.barrier, c)[0];
}

std::vector<McEstimate> persistence_curve(const HurstLaw& law, std::span<const double> horizons,
                                          const McConfig& cfg) {
    for (double t : horizons) {
        if (!(t >= 1.0)) throw ValidationError("persistence_curve: horizons must be >= 1");
    }
    return barrier_curve(law, horizons, cfg.barrier, cfg);
}

std::vector<McEstimate> small_barrier_curve(const HurstLaw& law, std::span<const double> epsilons,
                                            const McConfig& cfg) {
    if (epsilons.empty()) throw ValidationError("small_barrier_curve: empty epsilon grid");
    for (double e : epsilons) {
        if (!(e > 0.0)) throw ValidationError("small_barrier_curve: epsilons must be positive");
    }
    validate_config(cfg);

    // One path set on [0,1]; every epsilon is a threshold on the same
    // per-path maximum.
    const double horizon[] = {1.0};
    RouteTable table(law, horizon, cfg.grid_rule);
    const std::size_t n_eps = epsilons.size();
    const std::int64_t n_chunks = (cfg.n_paths + kChunkSize - 1) / kChunkSize;
    std::vector<std::vector<std::int64_t>> chunk_hits(static_cast<std::size_t>(n_chunks));

    run_chunks(n_chunks, cfg.workers, [&](std::int64_t chunk) {
        NormalRng hurst_rng(substream_seed(cfg.seed, StreamDomain::hurst, static_cast<std::uint64_t>(chunk)));
        NormalRng path_rng(substream_seed(cfg.seed, StreamDomain::path, static_cast<std::uint64_t>(chunk)));
        const std::int64_t begin = chunk * kChunkSize;
        const std::int64_t end = std::min(cfg.n_paths, begin + kChunkSize);
        std::vector<std::int64_t> hits(n_eps, 0);
        double prefmax = 0.0;
        for (std::int64_t p = begin; p < end; ++p) {
            const double h = law.sample(hurst_rng);
            const RouteEntry& e = table.lookup(h);
            switch (e.sampler) {
                case SamplerKind::white:
                    white_prefix_maxima(path_rng, e.n, e.horizon_idx, e.scale, {&prefmax, 1});
                    break;
                case SamplerKind::plan:
                    fgn_prefix_maxima(e.plan, path_rng, e.horizon_idx, e.scale, {&prefmax, 1});
                    break;
                case SamplerKind::degenerate: {
                    const double xi = path_rng.next_normal();
                    const double t_idx = static_cast<double>(e.horizon_idx[0]) / static_cast<double>(e.m);
                    prefmax = xi > 0.0 ? t_idx * xi : 0.0;
                    break;
                }
            }
            for (std::size_t j = 0; j < n_eps; ++j) {
                if (prefmax <= epsilons[j]) ++hits[j];
            }
        }
        chunk_hits[static_cast<std::size_t>(chunk)] = std::move(hits);
    });

    std::vector<McEstimate> out(n_eps);
    for (std::size_t j = 0; j < n_eps; ++j) {
        std::int64_t hits = 0;
        for (const auto& ch : chunk_hits) hits += ch[j];
        McEstimate est;
        est.n_paths = cfg.n_paths;
        est.n_hits = hits;
        est.p_hat = static_cast<double>(hits) / static_cast<double>(cfg.n_paths);
        est.std_err = std::sqrt(est.p_hat * (1.0 - est.p_hat) / static_cast<double>(cfg.n_paths));
        const Interval ci = wilson_interval(hits, cfg.n_paths, cfg.ci_level);
        est.ci_lo = ci.lo;
        est.ci_hi = ci.hi;
        out[j] = est;
    }
    return out;
}

std::vector<MeanVar> mc_path_statistics(
    double hurst, const GridSpec& grid, std::int64_t n_paths, std::uint64_t seed, int workers,
    int n_stats, const std::function<void(const Path&, std::span<double>)>& fn) {
    if (n_paths < 1) throw ValidationError("mc_path_statistics: n_paths must be positive");
    if (n_stats < 1) throw ValidationError("mc_path_statistics: n_stats must be positive");

    std::shared_ptr<const CirculantPlan> plan;
    if (hurst != 0.5 && hurst != 1.0) {
        plan = std::make_shared<CirculantPlan>(build_circulant_plan(hurst, grid.n_points()));
    }

    const std::int64_t n_chunks = (n_paths + kChunkSize - 1) / kChunkSize;
    const std::size_t ns = static_cast<std::size_t>(n_stats);
    std::vector<std::vector<double>> chunk_sums(static_cast<std::size_t>(n_chunks));
    std::vector<std::vector<double>> chunk_sumsq(static_cast<std::size_t>(n_chunks));
    std::vector<std::int64_t> chunk_counts(static_cast<std::size_t>(n_chunks), 0);

    run_chunks(n_chunks, workers, [&](std::int64_t chunk) {
        NormalRng rng(substream_seed(seed, StreamDomain::path, static_cast<std::uint64_t>(chunk)));
        const std::int64_t begin = chunk * kChunkSize;
        const std::int64_t end = std::min(n_paths, begin + kChunkSize);
        std::vector<double> sums(ns, 0.0), sumsq(ns, 0.0), stats(ns, 0.0);
        for (std::int64_t p = begin; p < end; ++p) {
            Path path = (hurst == 1.0) ? sample_degenerate_h1(grid, rng)
                        : plan          ? sample_fbm_path(*plan, grid, rng)
                                        : sample_fbm_path(hurst, grid, rng);
            fn(path, stats);
            for (std::size_t s = 0; s < ns; ++s) {
                sums[s] += stats[s];
                sumsq[s] += stats[s] * stats[s];
            }
        }
        chunk_sums[static_cast<std::size_t>(chunk)] = std::move(sums);
        chunk_sumsq[static_cast<std::size_t>(chunk)] = std::move(sumsq);
        chunk_counts[static_cast<std::size_t>(chunk)] = end - begin;
    });

    std::vector<MeanVar> out(ns);
    std::vector<double> s(static_cast<std::size_t>(n_chunks)), ss(static_cast<std::size_t>(n_chunks));
    for (std::size_t stat = 0; stat < ns; ++stat) {
        for (std::size_t c = 0; c < static_cast<std::size_t>(n_chunks); ++c) {
            s[c] = chunk_sums[c][stat];
            ss[c] = chunk_sumsq[c][stat];
        }
        out[stat] = merge_moments(s, ss, chunk_counts);
    }
    return out;
}

McEstimate estimate_expectation(const FunctionalSpec& spec, double hurst, const McConfig& cfg) {
    validate_config(cfg);
    if (spec.kind == FunctionalSpec::Kind::mgf && !(spec.param <= 4.0)) {
        throw ValidationError("estimate_expectation: mgf theta must be <= 4 (overflow guard)");
    }
    if (spec.kind == FunctionalSpec::Kind::exp_neg_integral && !(spec.param >= 1.0)) {
        throw ValidationError("estimate_expectation: exp_neg_integral needs T >= 1");
    }
    const std::int64_t m = grid_points_per_unit(hurst, cfg.grid_rule);
    const GridSpec grid{1.0, m};
    const double t_horizon = spec.param;
    const double theta = spec.param;
    const double th = spec.kind == FunctionalSpec::Kind::exp_neg_integral
                          ? std::pow(t_horizon, hurst)
                          : 0.0;

    auto fn = [&](const Path& path, std::span<double> out) {
        switch (spec.kind) {
            case FunctionalSpec::Kind::max01: {
                double mx = path.values[0];
                for (double v : path.values) mx = std::max(mx, v);
                out[0] = mx;
                break;
            }
            case FunctionalSpec::Kind::absmax01: {
                double mx = 0.0;
                for (double v : path.values) mx = std::max(mx, std::abs(v));
                out[0] = mx;
                break;
            }
            case FunctionalSpec::Kind::exp_neg_integral: {
                // (integral_0^T e^{B_s} ds)^{-1} via the self-similar form
                // T * integral_0^1 e^{T^H B_u} du, log-sum-exp stabilized.
                const double log_int =
                    std::log(t_horizon) + log_trapezoid_exp(path.values, path.grid.step(), th);
                out[0] = std::exp(-log_int);
                break;
            }
            case FunctionalSpec::Kind::mgf: {
                double mx = 0.0;
                for (double v : path.values) mx = std::max(mx, std::abs(v));
                out[0] = std::exp(theta * mx);
                break;
            }
        }
    };

    const auto moments =
        mc_path_statistics(hurst, grid, cfg.n_paths, cfg.seed, cfg.workers, 1, fn);
    const MeanVar& mv = moments[0];
    McEstimate est;
    est.n_paths = cfg.n_paths;
    est.n_hits = 0;
    est.p_hat = mv.mean;
    est.std_err = mv.std_err();
    const double z = normal_quantile(0.5 + 0.5 * cfg.ci_level);
    est.ci_lo = mv.mean - z * est.std_err;
    est.ci_hi = mv.mean + z * est.std_err;
    return est;
}

} // namespace fbmre
