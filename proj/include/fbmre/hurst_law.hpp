#pragma once
#include <utility>
#include <vector>

#include "fbmre/rng.hpp"

namespace fbmre {

// Distribution of the random Hurst exponent on (0, 1]. An atom at exactly 1
// is permitted and routes paths to the degenerate linear process.
class HurstLaw {
public:
    enum class Kind { point, uniform, scaled_beta, discrete };

    static HurstLaw point(double h);
    static HurstLaw uniform(double a, double b);
    // Beta(alpha, beta) draw mapped affinely onto [a, b].
    static HurstLaw scaled_beta(double alpha, double beta, double a, double b);
    static HurstLaw discrete(std::vector<std::pair<double, double>> atoms); // (h_i, p_i)

    Kind kind() const { return kind_; }
    double sample(NormalRng& rng) const;

    // Exact essential supremum H0.
    double ess_sup() const;
    // Left edge of the support (smallest atom / interval endpoint).
    double min_support() const;
    // Point and discrete laws take only finitely many values; plan
    // quantization is disabled for them.
    bool is_atomic() const { return kind_ == Kind::point || kind_ == Kind::discrete; }

    // Accessors used by serialization and reporting.
    double param_h() const { return h_; }
    double param_a() const { return a_; }
    double param_b() const { return b_; }
    double param_alpha() const { return alpha_; }
    double param_beta() const { return beta_; }
    const std::vector<std::pair<double, double>>& atoms() const { return atoms_; }

    // P(H >= x), exact per variant; used by support/mass assertions.
    double tail_mass(double x) const;

private:
    HurstLaw() = default;
    Kind kind_ = Kind::point;
    double h_ = 0.5;
    double a_ = 0.0, b_ = 0.0;
    double alpha_ = 1.0, beta_ = 1.0;
    std::vector<std::pair<double, double>> atoms_;
};

struct EssSup {
    double h0 = 0.0;
};

inline EssSup ess_sup(const HurstLaw& law) { return {law.ess_sup()}; }

double sample_h(const HurstLaw& law, NormalRng& rng);

} // namespace fbmre
