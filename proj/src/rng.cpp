#include "fbmre/rng.hpp"

#include <array>
#include <cmath>

namespace fbmre {

std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

std::uint64_t substream_seed(std::uint64_t master, StreamDomain domain, std::uint64_t chunk) {
    std::uint64_t s = mix64(master + 0x9e3779b97f4a7c15ULL);
    s = mix64(s ^ (static_cast<std::uint64_t>(domain) * 0xd6e8feb86659fd93ULL));
    s = mix64(s ^ (chunk * 0xa0761d6478bd642fULL));
    return s;
}

namespace {

// Ziggurat tables for the standard normal, 256 layers.
// x_tab[0] > x_tab[1] = R > ... > x_tab[256] = 0; f_tab[i] = exp(-x_i^2/2).
struct ZigguratTables {
    std::array<double, 257> x;
    std::array<double, 257> f;
};

constexpr double kZigR = 3.654152885361008772645;
constexpr double kZigV = 0.00492867323399141724418;

ZigguratTables make_tables() {
    ZigguratTables t{};
    auto pdf = [](double v) { return std::exp(-0.5 * v * v); };
    t.x[1] = kZigR;
    t.x[0] = kZigV / pdf(kZigR);
    t.f[1] = pdf(kZigR);
    t.f[0] = pdf(t.x[0]);
    for (int i = 1; i < 256; ++i) {
        double fnext = t.f[i] + kZigV / t.x[i];
        t.x[i + 1] = (fnext >= 1.0) ? 0.0 : std::sqrt(-2.0 * std::log(fnext));
        t.f[i + 1] = pdf(t.x[i + 1]);
    }
    t.x[256] = 0.0;
    t.f[256] = 1.0;
    return t;
}

const ZigguratTables& tables() {
    static const ZigguratTables t = make_tables();
    return t;
}

} // namespace

double NormalRng::next_normal() {
    const ZigguratTables& t = tables();
    for (;;) {
        const std::uint64_t r = gen_();
        const std::size_t layer = static_cast<std::size_t>(r & 0xff);
        const double sign = (r & 0x100) ? -1.0 : 1.0;
        const double u = static_cast<double>(r >> 11) * 0x1.0p-53;
        const double x = u * t.x[layer];
        if (x < t.x[layer + 1]) {
            return sign * x;
        }
        if (layer == 0) {
            // Tail beyond R, Marsaglia's exponential trick.
            for (;;) {
                const double u1 = next_uniform();
                const double u2 = next_uniform();
                if (u1 <= 0.0 || u2 <= 0.0) continue;
                const double xt = -std::log(u1) / kZigR;
                const double yt = -std::log(u2);
                if (2.0 * yt >= xt * xt) {
                    return sign * (kZigR + xt);
                }
            }
        }
        const double fx = std::exp(-0.5 * x * x);
        if (t.f[layer + 1] + next_uniform() * (t.f[layer] - t.f[layer + 1]) < fx) {
            return sign * x;
        }
    }
}

} // namespace fbmre
