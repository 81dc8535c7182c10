#include "fbmre/fit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fbmre/errors.hpp"

namespace fbmre {

ExponentFit fit_exponent(std::span<const FitPoint> points) {
    if (points.size() < 3) {
        throw DegenerateDesignError("fit_exponent: need at least 3 points");
    }
    std::vector<FitPoint> pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end(), [](const FitPoint& a, const FitPoint& b) {
        return a.x < b.x;
    });
    for (const auto& p : pts) {
        if (!(p.x > 0.0)) throw DegenerateDesignError("fit_exponent: x values must be positive");
        if (!(p.p_hat > 0.0)) throw DegenerateDesignError("fit_exponent: p_hat values must be positive");
        if (p.std_err < 0.0) throw DegenerateDesignError("fit_exponent: negative std_err");
    }
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (pts[i].x == pts[i - 1].x) {
            throw DegenerateDesignError("fit_exponent: coincident x values");
        }
    }

    const std::size_t n = pts.size();
    std::vector<double> lx(n), ly(n), w(n);
    for (std::size_t i = 0; i < n; ++i) {
        lx[i] = std::log(pts[i].x);
        ly[i] = std::log(pts[i].p_hat);
        const double rel = pts[i].std_err / pts[i].p_hat;
        // Exact points get a huge (but finite) weight so mixed inputs stay
        // well defined.
        w[i] = 1.0 / std::max(rel * rel, 1e-300);
    }

    double sw = 0.0, swx = 0.0, swy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sw += w[i];
        swx += w[i] * lx[i];
        swy += w[i] * ly[i];
    }
    const double xbar = swx / sw;
    const double ybar = swy / sw;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = lx[i] - xbar;
        const double dy = ly[i] - ybar;
        sxx += w[i] * dx * dx;
        sxy += w[i] * dx * dy;
        syy += w[i] * dy * dy;
    }
    if (!(sxx > 0.0)) {
        throw DegenerateDesignError("fit_exponent: x values coincide after log transform");
    }

    ExponentFit fit;
    fit.n_points = static_cast<std::int64_t>(n);
    fit.slope = sxy / sxx;
    fit.intercept = ybar - fit.slope * xbar;
    fit.slope_se = std::sqrt(1.0 / sxx);
    double ssr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
        ssr += w[i] * r * r;
    }
    fit.r_squared = syy > 0.0 ? std::max(0.0, 1.0 - ssr / syy) : 1.0;
    return fit;
}

PredictedExponent PredictedExponent::fixed_h(double h) {
    PredictedExponent p;
    p.kind = Kind::fixed_h;
    p.h = h;
    return p;
}

PredictedExponent PredictedExponent::annealed(HurstLaw law) {
    PredictedExponent p;
    p.kind = Kind::annealed;
    p.law = std::move(law);
    return p;
}

PredictedExponent PredictedExponent::small_barrier(HurstLaw law) {
    PredictedExponent p;
    p.kind = Kind::small_barrier;
    p.law = std::move(law);
    return p;
}

double predicted_exponent(const PredictedExponent& kind) {
    switch (kind.kind) {
        case PredictedExponent::Kind::fixed_h: {
            if (!(kind.h > 0.0 && kind.h <= 1.0)) {
                throw std::domain_error("predicted_exponent: h must lie in (0,1]");
            }
            return 1.0 - kind.h;
        }
        case PredictedExponent::Kind::annealed:
            return 1.0 - kind.law.ess_sup();
        case PredictedExponent::Kind::small_barrier: {
            const double h0 = kind.law.ess_sup();
            return (1.0 - h0) / h0;
        }
    }
    return 0.0;
}

} // namespace fbmre
