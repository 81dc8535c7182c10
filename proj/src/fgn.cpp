#include "fbmre/fgn.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <stdexcept>

#include "fbmre/errors.hpp"
#include "fft_engine.hpp"

namespace fbmre {

double fgn_autocov(double hurst, std::int64_t lag) {
    if (!(hurst > 0.0 && hurst < 1.0)) {
        throw std::domain_error("fgn_autocov: hurst must lie in (0,1)");
    }
    if (lag < 0) throw std::domain_error("fgn_autocov: lag must be nonnegative");
    const double h2 = 2.0 * hurst;
    const double k = static_cast<double>(lag);
    return 0.5 * (std::pow(k + 1.0, h2) - 2.0 * std::pow(k, h2) +
                  std::pow(std::abs(k - 1.0), h2));
}

CirculantPlan build_circulant_plan(double hurst, std::int64_t n_increments) {
    if (!(hurst >= kHurstMin && hurst <= kHurstMax)) {
        throw std::domain_error("build_circulant_plan: hurst outside supported range");
    }
    if (n_increments < 1) {
        throw std::domain_error("build_circulant_plan: need at least one increment");
    }
    const std::int64_t n = n_increments;
    const std::int64_t m = 2 * n;

    std::vector<double> ring(static_cast<std::size_t>(m));
    for (std::int64_t j = 0; j <= n; ++j) {
        ring[static_cast<std::size_t>(j)] = fgn_autocov(hurst, j);
    }
    for (std::int64_t j = n + 1; j < m; ++j) {
        ring[static_cast<std::size_t>(j)] = ring[static_cast<std::size_t>(m - j)];
    }

    std::vector<double> half;
    fft::real_symmetric_dft(ring, half); // eigenvalues for k = 0..n

    CirculantPlan plan;
    plan.hurst = hurst;
    plan.n_increments = n;
    plan.eigenvalues.assign(static_cast<std::size_t>(m), 0.0);
    for (std::int64_t k = 0; k <= n; ++k) {
        plan.eigenvalues[static_cast<std::size_t>(k)] = half[static_cast<std::size_t>(k)];
    }
    for (std::int64_t k = n + 1; k < m; ++k) {
        plan.eigenvalues[static_cast<std::size_t>(k)] = half[static_cast<std::size_t>(m - k)];
    }

    const double max_eig = *std::max_element(plan.eigenvalues.begin(), plan.eigenvalues.end());
    const double floor_eig = -kEigClipTol * max_eig;
    for (double& lam : plan.eigenvalues) {
        if (lam < 0.0) {
            if (lam < floor_eig) {
                throw EmbeddingNotPsdError("circulant embedding has eigenvalue " +
                                           std::to_string(lam) + " below tolerance at H=" +
                                           std::to_string(hurst));
            }
            plan.clipped_mass += -lam;
            lam = 0.0;
        }
    }

    plan.spectral_scale.resize(static_cast<std::size_t>(n + 1));
    for (std::int64_t k = 0; k <= n; ++k) {
        plan.spectral_scale[static_cast<std::size_t>(k)] =
            std::sqrt(plan.eigenvalues[static_cast<std::size_t>(k)] / static_cast<double>(m));
    }
    return plan;
}

namespace {

fft::InverseTransform& thread_transform(std::int64_t m) {
    thread_local std::map<std::int64_t, std::unique_ptr<fft::InverseTransform>> cache;
    auto& slot = cache[m];
    if (!slot) slot = std::make_unique<fft::InverseTransform>(m);
    return *slot;
}

constexpr double kInvSqrt2 = 0.7071067811865475244;

} // namespace

void sample_unit_fgn(const CirculantPlan& plan, NormalRng& rng, std::vector<double>& out) {
    const std::int64_t n = plan.n_increments;
    const std::int64_t m = 2 * n;
    out.resize(static_cast<std::size_t>(n));

    fft::InverseTransform& tr = thread_transform(m);
    double* spec = tr.spectrum();
    const double* scale = plan.spectral_scale.data();

    spec[0] = scale[0] * rng.next_normal();
    spec[1] = 0.0;
    for (std::int64_t k = 1; k < n; ++k) {
        const double s = scale[k] * kInvSqrt2;
        spec[2 * k] = s * rng.next_normal();
        spec[2 * k + 1] = s * rng.next_normal();
    }
    spec[2 * n] = scale[n] * rng.next_normal();
    spec[2 * n + 1] = 0.0;

    tr.execute();
    const double* y = tr.output();
    std::copy(y, y + n, out.begin());
}

namespace {

Path cumulate(double hurst, const GridSpec& grid, const std::vector<double>& increments) {
    const std::int64_t n = grid.n_points();
    Path p;
    p.hurst = hurst;
    p.grid = grid;
    p.values.resize(static_cast<std::size_t>(n + 1));
    p.values[0] = 0.0;
    const double scale = std::pow(grid.step(), hurst);
    double acc = 0.0;
    for (std::int64_t k = 0; k < n; ++k) {
        acc += increments[static_cast<std::size_t>(k)];
        p.values[static_cast<std::size_t>(k + 1)] = acc * scale;
    }
    return p;
}

} // namespace

Path sample_fbm_path(const CirculantPlan& plan, const GridSpec& grid, NormalRng& rng) {
    const std::int64_t n = grid.n_points();
    if (plan.n_increments != n) {
        throw std::invalid_argument("sample_fbm_path: plan size does not match grid");
    }
    thread_local std::vector<double> fgn;
    sample_unit_fgn(plan, rng, fgn);
    return cumulate(plan.hurst, grid, fgn);
}

Path sample_fbm_path(double hurst, const GridSpec& grid, NormalRng& rng) {
    if (!(hurst > 0.0 && hurst < 1.0)) {
        throw std::domain_error("sample_fbm_path: hurst must lie in (0,1)");
    }
    const std::int64_t n = grid.n_points();
    if (hurst == 0.5) {
        // fGn(1/2) is iid N(0,1); skip the spectral synthesis.
        thread_local std::vector<double> fgn;
        fgn.resize(static_cast<std::size_t>(n));
        for (auto& x : fgn) x = rng.next_normal();
        return cumulate(hurst, grid, fgn);
    }
    const CirculantPlan plan = build_circulant_plan(hurst, n);
    return sample_fbm_path(plan, grid, rng);
}

CholeskyFactor::CholeskyFactor(double hurst, const GridSpec& grid) : hurst_(hurst), grid_(grid) {
    if (!(hurst > 0.0 && hurst < 1.0)) {
        throw std::domain_error("CholeskyFactor: hurst must lie in (0,1)");
    }
    n_ = grid.n_points();
    if (n_ + 1 > kCholMaxPoints) {
        throw SizeExceededError("CholeskyFactor: grid has " + std::to_string(n_ + 1) +
                                " points, cap is " + std::to_string(kCholMaxPoints));
    }
    const double h2 = 2.0 * hurst;
    const std::size_t n = static_cast<std::size_t>(n_);
    lower_.assign(n * n, 0.0);
    // Covariance of B at times (k+1)/m, k = 0..n-1.
    for (std::size_t i = 0; i < n; ++i) {
        const double ti = grid.time_at(static_cast<std::int64_t>(i + 1));
        for (std::size_t j = 0; j <= i; ++j) {
            const double tj = grid.time_at(static_cast<std::int64_t>(j + 1));
            lower_[i * n + j] = 0.5 * (std::pow(ti, h2) + std::pow(tj, h2) -
                                       std::pow(std::abs(ti - tj), h2));
        }
    }
    // In-place lower Cholesky.
    for (std::size_t j = 0; j < n; ++j) {
        double d = lower_[j * n + j];
        for (std::size_t k = 0; k < j; ++k) d -= lower_[j * n + k] * lower_[j * n + k];
        if (!(d > 0.0)) {
            throw FactorizationFailedError("CholeskyFactor: matrix not numerically PD at H=" +
                                           std::to_string(hurst));
        }
        const double root = std::sqrt(d);
        lower_[j * n + j] = root;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = lower_[i * n + j];
            for (std::size_t k = 0; k < j; ++k) s -= lower_[i * n + k] * lower_[j * n + k];
            lower_[i * n + j] = s / root;
        }
    }
}

Path CholeskyFactor::sample(NormalRng& rng) const {
    const std::size_t n = static_cast<std::size_t>(n_);
    std::vector<double> z(n);
    for (auto& x : z) x = rng.next_normal();
    Path p;
    p.hurst = hurst_;
    p.grid = grid_;
    p.values.assign(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j <= i; ++j) s += lower_[i * n + j] * z[j];
        p.values[i + 1] = s;
    }
    return p;
}

Path sample_fbm_cholesky(double hurst, const GridSpec& grid, NormalRng& rng) {
    CholeskyFactor factor(hurst, grid);
    return factor.sample(rng);
}

Path sample_degenerate_h1(const GridSpec& grid, NormalRng& rng) {
    const std::int64_t n = grid.n_points();
    const double xi = rng.next_normal();
    Path p;
    p.hurst = 1.0;
    p.grid = grid;
    p.values.resize(static_cast<std::size_t>(n + 1));
    for (std::int64_t k = 0; k <= n; ++k) {
        p.values[static_cast<std::size_t>(k)] = grid.time_at(k) * xi;
    }
    return p;
}

} // namespace fbmre
