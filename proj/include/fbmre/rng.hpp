#pragma once
#include <cstdint>
#include <random>

namespace fbmre {

// Stream domains. H-draws and path-draws must come from disjoint substreams
// of the master seed so the simulated law is an exact product measure.
enum class StreamDomain : std::uint64_t {
    path = 0x01,
    hurst = 0x02,
    replicate = 0x03,
    bench = 0x04,
};

// SplitMix64 finalizer (Stafford mix13). Used only to derive substream seeds.
std::uint64_t mix64(std::uint64_t x);

// Deterministic substream seed for (master, domain, chunk).
std::uint64_t substream_seed(std::uint64_t master, StreamDomain domain, std::uint64_t chunk);

// Normal generator: mt19937_64 driving a 256-layer ziggurat.
// One instance per chunk; not thread-safe across calls.
class NormalRng {
public:
    explicit NormalRng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform on [0, 1) with 53 random bits.
    double next_uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double next_normal();

    // UniformRandomBitGenerator interface so std:: distributions can run on
    // this stream (used for Beta sampling via two gammas).
    using result_type = std::uint64_t;
    static constexpr result_type min() { return std::mt19937_64::min(); }
    static constexpr result_type max() { return std::mt19937_64::max(); }
    result_type operator()() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

} // namespace fbmre
