#pragma once
#include <cstdint>
#include <span>
#include <vector>

namespace fbmre {

double normal_pdf(double x);
double normal_cdf(double x);
// Inverse of normal_cdf, accurate to ~1e-14 (rational approximation plus one
// Halley refinement against erfc).
double normal_quantile(double p);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

// Wilson score interval for a binomial proportion.
Interval wilson_interval(std::int64_t hits, std::int64_t n, double ci_level);

// One-sample Kolmogorov-Smirnov statistic against a N(0, sigma^2) law.
// Sorts a copy of the data.
double ks_statistic_normal(std::span<const double> data, double sigma);

struct MeanVar {
    std::int64_t n = 0;
    double mean = 0.0;
    double var = 0.0; // unbiased sample variance
    double std_err() const;
};

MeanVar mean_var(std::span<const double> data);

// Merge per-chunk partial sums in fixed chunk order. sums[i] / sumsq[i] are
// the plain and squared sums of chunk i.
MeanVar merge_moments(std::span<const double> sums, std::span<const double> sumsq,
                      std::span<const std::int64_t> counts);

} // namespace fbmre
