#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "fbmre/errors.hpp"
#include "fbmre/fgn.hpp"
#include "fbmre/grid.hpp"
#include "fbmre/rng.hpp"
#include "oracles.hpp"

using namespace fbmre;

TEST_CASE("grid spec covers the horizon") {
    GridSpec g{2.5, 2};
    CHECK(g.n_points() == 5);
    CHECK(g.time_at(g.n_points()) == doctest::Approx(2.5));
    GridSpec h{2.3, 2};
    CHECK(h.n_points() == 5);
    const double last = h.time_at(h.n_points());
    CHECK(last >= 2.3);
    CHECK(last < 2.3 + 0.5);
    GridSpec u{1.0, 1};
    CHECK(u.n_points() == 1);
}

TEST_CASE("fgn autocovariance") {
    CHECK(fgn_autocov(0.5, 1) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(fgn_autocov(0.5, 7) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(fgn_autocov(0.3, 0) == doctest::Approx(1.0));
    CHECK(fgn_autocov(0.9, 0) == doctest::Approx(1.0));
    // 0.5*(2^1.5 - 2) = sqrt(2) - 1
    CHECK(fgn_autocov(0.75, 1) == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-7));
    CHECK_THROWS_AS(fgn_autocov(0.0, 1), std::domain_error);
    CHECK_THROWS_AS(fgn_autocov(1.0, 1), std::domain_error);
    CHECK_THROWS_AS(fgn_autocov(0.5, -1), std::domain_error);
}

TEST_CASE("circulant plan at H=1/2 is white") {
    const CirculantPlan plan = build_circulant_plan(0.5, 4);
    CHECK(plan.eigenvalues.size() == 8);
    for (double lam : plan.eigenvalues) {
        CHECK(lam == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(plan.clipped_mass <= 1e-9);
}

TEST_CASE("circulant plan eigenvalues match a direct DFT sum at n=8") {
    const double h = 0.7;
    const std::int64_t n = 8;
    const CirculantPlan plan = build_circulant_plan(h, n);
    // Direct cosine sum over the symmetrized ring.
    for (std::int64_t k = 0; k < 2 * n; ++k) {
        double lam = fgn_autocov(h, 0);
        for (std::int64_t j = 1; j < n; ++j) {
            lam += 2.0 * fgn_autocov(h, j) *
                   std::cos(2.0 * std::numbers::pi * static_cast<double>(j * k) / (2.0 * n));
        }
        lam += fgn_autocov(h, n) * std::cos(std::numbers::pi * static_cast<double>(k));
        CHECK(plan.eigenvalues[static_cast<std::size_t>(k)] ==
              doctest::Approx(lam).epsilon(1e-10));
    }
}

TEST_CASE("circulant plan eigenvalues match a dense eigensolver at H=0.3, n=8") {
    const double h = 0.3;
    const std::size_t n = 8;
    const std::size_t m = 2 * n;
    std::vector<double> ring(m);
    for (std::size_t j = 0; j <= n; ++j) ring[j] = fgn_autocov(h, static_cast<std::int64_t>(j));
    for (std::size_t j = n + 1; j < m; ++j) ring[j] = ring[m - j];
    std::vector<double> dense(m * m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            dense[i * m + j] = ring[(j + m - i) % m];
        }
    }
    std::vector<double> want = oracles::jacobi_eigenvalues(dense, m);

    CirculantPlan plan = build_circulant_plan(h, static_cast<std::int64_t>(n));
    std::vector<double> got = plan.eigenvalues;
    std::sort(got.begin(), got.end());
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < m; ++i) {
        CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-10));
    }
}

TEST_CASE("circulant embedding stays nonnegative across H and n") {
    for (double h : {0.05, 0.1, 0.3, 0.7, 0.9, 0.99}) {
        for (std::int64_t n : {1, 2, 7, 64, 1024}) {
            const CirculantPlan plan = build_circulant_plan(h, n);
            for (double lam : plan.eigenvalues) CHECK(lam >= 0.0);
        }
    }
}

TEST_CASE("circulant builder rejects extreme exponents") {
    CHECK_THROWS_AS(build_circulant_plan(5e-4, 8), std::domain_error);
    CHECK_THROWS_AS(build_circulant_plan(1.0 - 1e-10, 8), std::domain_error);
    CHECK_THROWS_AS(build_circulant_plan(0.5, 0), std::domain_error);
}

TEST_CASE("sampled paths start at zero and have the right length") {
    NormalRng rng(5);
    for (double h : {0.2, 0.5, 0.8}) {
        const GridSpec grid{3.0, 4};
        const Path p = sample_fbm_path(h, grid, rng);
        CHECK(p.values.size() == static_cast<std::size_t>(grid.n_points() + 1));
        CHECK(p.values[0] == 0.0);
        for (double v : p.values) CHECK(std::isfinite(v));
    }
}

TEST_CASE("sampling is deterministic in the seed") {
    const GridSpec grid{2.0, 8};
    for (double h : {0.35, 0.5}) {
        NormalRng a(2024), b(2024);
        const Path pa = sample_fbm_path(h, grid, a);
        const Path pb = sample_fbm_path(h, grid, b);
        REQUIRE(pa.values.size() == pb.values.size());
        for (std::size_t i = 0; i < pa.values.size(); ++i) {
            CHECK(pa.values[i] == pb.values[i]);
        }
    }
}

TEST_CASE("cholesky oracle caps the grid size") {
    NormalRng rng(1);
    CHECK_THROWS_AS(sample_fbm_cholesky(0.5, GridSpec{8192.0, 1}, rng), SizeExceededError);
}

TEST_CASE("degenerate H=1 paths are linear in t") {
    NormalRng rng(12);
    const GridSpec grid{4.0, 3};
    const Path p = sample_degenerate_h1(grid, rng);
    CHECK(p.values[0] == 0.0);
    const double xi = p.values[3]; // value at t = 1
    for (std::int64_t k = 0; k <= grid.n_points(); ++k) {
        CHECK(p.values[static_cast<std::size_t>(k)] ==
              doctest::Approx(grid.time_at(k) * xi).epsilon(1e-12));
    }
}

TEST_CASE("path functionals on hand-built paths") {
    // Constant zero path.
    Path zero;
    zero.hurst = 0.5;
    zero.grid = GridSpec{3.0, 1};
    zero.values = {0.0, 0.0, 0.0, 0.0};
    const PathFunctionals fz = path_functionals(zero, 3.0);
    CHECK(fz.max == 0.0);
    CHECK(fz.abs_max == 0.0);
    CHECK(fz.exp_integral == doctest::Approx(3.0).epsilon(1e-14));

    // Values [0, 1, -2] at unit step.
    Path p;
    p.hurst = 0.5;
    p.grid = GridSpec{2.0, 1};
    p.values = {0.0, 1.0, -2.0};
    const PathFunctionals f = path_functionals(p, 2.0);
    CHECK(f.max == 1.0);
    CHECK(f.abs_max == 2.0);
    const double e = std::numbers::e;
    const double want = 0.5 * (1.0 + e) + 0.5 * (e + std::exp(-2.0));
    CHECK(f.exp_integral == doctest::Approx(want).epsilon(1e-14));
    CHECK(want == doctest::Approx(3.285949470077352).epsilon(1e-12));

    // Degenerate path with xi = 1, m = 1, T = 2.
    Path d;
    d.hurst = 1.0;
    d.grid = GridSpec{2.0, 1};
    d.values = {0.0, 1.0, 2.0};
    const PathFunctionals fd = path_functionals(d, 2.0);
    CHECK(fd.max == 2.0);
    const double want_d = 0.5 * (1.0 + e) + 0.5 * (e + e * e);
    CHECK(fd.exp_integral == doctest::Approx(want_d).epsilon(1e-14));

    // Sub-horizon cuts the grid.
    const PathFunctionals fsub = path_functionals(p, 1.0);
    CHECK(fsub.max == 1.0);
    CHECK(fsub.abs_max == 1.0);
    CHECK(fsub.exp_integral == doctest::Approx(0.5 * (1.0 + e)).epsilon(1e-14));
}

TEST_CASE("log trapezoid matches direct evaluation and survives large scales") {
    const std::vector<double> v = {0.0, 1.0, -2.0};
    const double direct = 0.5 * (1.0 + std::numbers::e) +
                          0.5 * (std::numbers::e + std::exp(-2.0));
    CHECK(log_trapezoid_exp(v, 1.0, 1.0) == doctest::Approx(std::log(direct)).epsilon(1e-13));

    const std::vector<double> big = {500.0, 600.0, 550.0};
    const double lt = log_trapezoid_exp(big, 0.5, 2.0);
    CHECK(std::isfinite(lt));
    // Dominated by the peak term, so the log lands near 2*600.
    CHECK(lt > 1199.0);
    CHECK(lt < 1201.0);

    CHECK_THROWS_AS(log_trapezoid_exp(std::vector<double>{1.0}, 1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(log_trapezoid_exp(v, 1.0, -1.0), std::domain_error);
}

TEST_CASE("self-similarity is an exact kernel identity") {
    // Cov on [0,1] scaled by T^{2H} equals Cov at rescaled times on [0,T].
    for (double h : {0.25, 0.5, 0.75}) {
        const double t_scale = 7.5;
        for (double s : {0.1, 0.4, 0.9}) {
            for (double t : {0.2, 0.6, 1.0}) {
                const double lhs = std::pow(t_scale, 2.0 * h) * oracles::fbm_cov(h, s, t);
                const double rhs = oracles::fbm_cov(h, t_scale * s, t_scale * t);
                CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
            }
        }
    }
}
