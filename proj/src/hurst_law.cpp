#include "fbmre/hurst_law.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace fbmre {

HurstLaw HurstLaw::point(double h) {
    if (!(h > 0.0 && h <= 1.0)) throw std::domain_error("HurstLaw::point: h must lie in (0,1]");
    HurstLaw law;
    law.kind_ = Kind::point;
    law.h_ = h;
    return law;
}

HurstLaw HurstLaw::uniform(double a, double b) {
    if (!(a > 0.0 && a < b && b <= 1.0)) {
        throw std::domain_error("HurstLaw::uniform: need 0 < a < b <= 1");
    }
    HurstLaw law;
    law.kind_ = Kind::uniform;
    law.a_ = a;
    law.b_ = b;
    return law;
}

HurstLaw HurstLaw::scaled_beta(double alpha, double beta, double a, double b) {
    if (!(alpha > 0.0 && beta > 0.0)) {
        throw std::domain_error("HurstLaw::scaled_beta: shape parameters must be positive");
    }
    if (!(a > 0.0 && a < b && b <= 1.0)) {
        throw std::domain_error("HurstLaw::scaled_beta: need 0 < a < b <= 1");
    }
    HurstLaw law;
    law.kind_ = Kind::scaled_beta;
    law.alpha_ = alpha;
    law.beta_ = beta;
    law.a_ = a;
    law.b_ = b;
    return law;
}

HurstLaw HurstLaw::discrete(std::vector<std::pair<double, double>> atoms) {
    if (atoms.empty()) throw std::domain_error("HurstLaw::discrete: no atoms");
    double total = 0.0;
    for (const auto& [h, p] : atoms) {
        if (!(h > 0.0 && h <= 1.0)) {
            throw std::domain_error("HurstLaw::discrete: atom outside (0,1]");
        }
        if (!(p > 0.0)) throw std::domain_error("HurstLaw::discrete: weights must be positive");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw std::domain_error("HurstLaw::discrete: weights must sum to 1");
    }
    HurstLaw law;
    law.kind_ = Kind::discrete;
    law.atoms_ = std::move(atoms);
    return law;
}

double HurstLaw::sample(NormalRng& rng) const {
    switch (kind_) {
        case Kind::point:
            return h_;
        case Kind::uniform: {
            // Half-open draw keeps the value strictly inside (a, b].
            const double u = 1.0 - rng.next_uniform();
            return a_ + (b_ - a_) * u;
        }
        case Kind::scaled_beta: {
            std::gamma_distribution<double> gx(alpha_, 1.0);
            std::gamma_distribution<double> gy(beta_, 1.0);
            const double x = gx(rng);
            const double y = gy(rng);
            const double t = (x + y > 0.0) ? x / (x + y) : 0.5;
            return std::min(b_, std::max(a_, a_ + (b_ - a_) * t));
        }
        case Kind::discrete: {
            const double u = rng.next_uniform();
            double acc = 0.0;
            for (const auto& [h, p] : atoms_) {
                acc += p;
                if (u < acc) return h;
            }
            return atoms_.back().first;
        }
    }
    return h_;
}

double HurstLaw::ess_sup() const {
    switch (kind_) {
        case Kind::point:
            return h_;
        case Kind::uniform:
        case Kind::scaled_beta:
            return b_;
        case Kind::discrete: {
            double m = 0.0;
            for (const auto& [h, p] : atoms_) m = std::max(m, h);
            return m;
        }
    }
    return h_;
}

double HurstLaw::min_support() const {
    switch (kind_) {
        case Kind::point:
            return h_;
        case Kind::uniform:
        case Kind::scaled_beta:
            return a_;
        case Kind::discrete: {
            double m = 1.0;
            for (const auto& [h, p] : atoms_) m = std::min(m, h);
            return m;
        }
    }
    return h_;
}

double HurstLaw::tail_mass(double x) const {
    switch (kind_) {
        case Kind::point:
            return h_ >= x ? 1.0 : 0.0;
        case Kind::uniform: {
            if (x <= a_) return 1.0;
            if (x >= b_) return 0.0;
            return (b_ - x) / (b_ - a_);
        }
        case Kind::scaled_beta: {
            if (x <= a_) return 1.0;
            if (x >= b_) return 0.0;
            // Regularized incomplete beta via continued fraction is overkill
            // here; a fixed Simpson rule on the density is exact enough for
            // the positivity assertions this feeds.
            const double t1 = (x - a_) / (b_ - a_);
            const int steps = 2048;
            double acc = 0.0;
            auto dens = [&](double t) {
                return std::pow(t, alpha_ - 1.0) * std::pow(1.0 - t, beta_ - 1.0);
            };
            const double h = (1.0 - t1) / steps;
            for (int i = 0; i < steps; ++i) {
                const double lo = t1 + i * h;
                acc += (dens(lo) + 4.0 * dens(lo + 0.5 * h) + dens(lo + h)) * h / 6.0;
            }
            double norm = 0.0;
            const double hn = 1.0 / steps;
            for (int i = 0; i < steps; ++i) {
                const double lo = i * hn;
                norm += (dens(lo + 1e-12) + 4.0 * dens(lo + 0.5 * hn) + dens(lo + hn - 1e-12)) * hn / 6.0;
            }
            return acc / norm;
        }
        case Kind::discrete: {
            double acc = 0.0;
            for (const auto& [h, p] : atoms_) {
                if (h >= x) acc += p;
            }
            return acc;
        }
    }
    return 0.0;
}

double sample_h(const HurstLaw& law, NormalRng& rng) { return law.sample(rng); }

} // namespace fbmre
