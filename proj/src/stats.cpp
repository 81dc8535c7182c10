#include "fbmre/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fbmre {

double normal_pdf(double x) {
    static const double inv_sqrt_2pi = 0.3989422804014326779;
    return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x * 0.7071067811865475244);
}

namespace {

// Acklam's rational approximation for the probit function.
double probit_approx(double p) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    if (p < plow) {
        double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - plow) {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    double q = p - 0.5;
    double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

} // namespace

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::domain_error("normal_quantile: p must lie in (0,1)");
    }
    double x = probit_approx(p);
    // One Halley step against the full-precision CDF.
    double e = normal_cdf(x) - p;
    double u = e / normal_pdf(x);
    x = x - u / (1.0 + 0.5 * x * u);
    return x;
}

Interval wilson_interval(std::int64_t hits, std::int64_t n, double ci_level) {
    if (n <= 0) throw std::domain_error("wilson_interval: n must be positive");
    const double z = normal_quantile(0.5 + 0.5 * ci_level);
    const double z2 = z * z;
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(hits) / nn;
    const double denom = 1.0 + z2 / nn;
    const double center = (p + z2 / (2.0 * nn)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

double ks_statistic_normal(std::span<const double> data, double sigma) {
    std::vector<double> v(data.begin(), data.end());
    std::sort(v.begin(), v.end());
    const double n = static_cast<double>(v.size());
    double d = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double f = normal_cdf(v[i] / sigma);
        const double lo = static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n;
        d = std::max(d, std::max(f - lo, hi - f));
    }
    return d;
}

double MeanVar::std_err() const {
    return n > 1 ? std::sqrt(var / static_cast<double>(n)) : 0.0;
}

MeanVar mean_var(std::span<const double> data) {
    MeanVar out;
    out.n = static_cast<std::int64_t>(data.size());
    if (out.n == 0) return out;
    double s = 0.0;
    for (double x : data) s += x;
    out.mean = s / static_cast<double>(out.n);
    double ss = 0.0;
    for (double x : data) {
        const double d = x - out.mean;
        ss += d * d;
    }
    out.var = out.n > 1 ? ss / static_cast<double>(out.n - 1) : 0.0;
    return out;
}

MeanVar merge_moments(std::span<const double> sums, std::span<const double> sumsq,
                      std::span<const std::int64_t> counts) {
    MeanVar out;
    double s = 0.0, ss = 0.0;
    for (std::size_t i = 0; i < sums.size(); ++i) {
        s += sums[i];
        ss += sumsq[i];
        out.n += counts[i];
    }
    if (out.n == 0) return out;
    const double nn = static_cast<double>(out.n);
    out.mean = s / nn;
    if (out.n > 1) {
        out.var = std::max(0.0, (ss - nn * out.mean * out.mean) / (nn - 1.0));
    }
    return out;
}

} // namespace fbmre
