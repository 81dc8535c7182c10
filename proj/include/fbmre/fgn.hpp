#pragma once
#include <cstdint>
#include <vector>

#include "fbmre/grid.hpp"
#include "fbmre/rng.hpp"

namespace fbmre {

// Autocovariance of unit-step fractional Gaussian noise,
// gamma_H(k) = (|k+1|^{2H} - 2|k|^{2H} + |k-1|^{2H}) / 2.
double fgn_autocov(double hurst, std::int64_t lag);

// Precomputed eigenvalues of the circulant embedding of the fGn covariance
// for one (H, n). Embedding size is the minimal even circulant 2n.
struct CirculantPlan {
    double hurst = 0.5;
    std::int64_t n_increments = 0;
    std::vector<double> eigenvalues;   // length 2n, all >= 0 after clipping
    double clipped_mass = 0.0;         // total magnitude of clipped negatives

    // sqrt(eigenvalue_k / 2n) for k = 0..n, ready for the half-spectrum
    // synthesis step.
    std::vector<double> spectral_scale;
};

// Relative clip tolerance for negative eigenvalue dust.
inline constexpr double kEigClipTol = 1e-9;

// Accepted Hurst range for the circulant builder; conditioning degrades
// outside it.
inline constexpr double kHurstMin = 1e-3;
inline constexpr double kHurstMax = 1.0 - 1e-9;

// Grid-point cap for the dense Cholesky oracle.
inline constexpr std::int64_t kCholMaxPoints = 4096;

CirculantPlan build_circulant_plan(double hurst, std::int64_t n_increments);

// Exact FBM sample on the grid via circulant embedding: unit-step fGn,
// cumulative sum, scaled by (1/m)^H. values[0] = 0; values[k] is centered
// Gaussian with variance (k/m)^{2H}. At H = 1/2 the increments are iid and
// are drawn directly.
Path sample_fbm_path(double hurst, const GridSpec& grid, NormalRng& rng);
Path sample_fbm_path(const CirculantPlan& plan, const GridSpec& grid, NormalRng& rng);

// Dense-factorization oracle: exact sample from the same finite-dimensional
// law. O(n^3) setup per call; intended for tests and small grids.
Path sample_fbm_cholesky(double hurst, const GridSpec& grid, NormalRng& rng);

// Reusable factorization behind the oracle, so a batch of oracle samples
// pays the O(n^3) setup once.
class CholeskyFactor {
public:
    CholeskyFactor(double hurst, const GridSpec& grid);
    Path sample(NormalRng& rng) const;
    std::int64_t n_increments() const { return n_; }

private:
    double hurst_;
    GridSpec grid_;
    std::int64_t n_ = 0;
    std::vector<double> lower_;
};

// Degenerate H = 1 process: values[k] = (k/m) * xi with one standard normal
// xi per path.
Path sample_degenerate_h1(const GridSpec& grid, NormalRng& rng);

// Raw unit-step fGn block (n increments) written into out; used by samplers
// and by checks that work directly on increment sequences.
void sample_unit_fgn(const CirculantPlan& plan, NormalRng& rng, std::vector<double>& out);

} // namespace fbmre
