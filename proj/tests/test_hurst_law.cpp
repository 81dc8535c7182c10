#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "fbmre/hurst_law.hpp"
#include "fbmre/rng.hpp"

using namespace fbmre;

TEST_CASE("point law always returns its atom") {
    const HurstLaw law = HurstLaw::point(0.5);
    NormalRng rng(3);
    for (int i = 0; i < 100; ++i) CHECK(law.sample(rng) == 0.5);
    CHECK(law.ess_sup() == 0.5);
    CHECK(ess_sup(law).h0 == 0.5);
}

TEST_CASE("essential suprema are exact per variant") {
    CHECK(HurstLaw::point(0.37).ess_sup() == 0.37);
    CHECK(HurstLaw::uniform(0.4, 0.8).ess_sup() == 0.8);
    CHECK(HurstLaw::scaled_beta(2.0, 3.0, 0.2, 0.9).ess_sup() == 0.9);
    CHECK(HurstLaw::discrete({{0.3, 0.9}, {0.95, 0.1}}).ess_sup() == 0.95);
    CHECK(HurstLaw::discrete({{0.3, 0.5}, {1.0, 0.5}}).ess_sup() == 1.0);
}

TEST_CASE("invalid laws are rejected") {
    CHECK_THROWS_AS(HurstLaw::point(0.0), std::domain_error);
    CHECK_THROWS_AS(HurstLaw::point(1.5), std::domain_error);
    CHECK_THROWS_AS(HurstLaw::uniform(0.8, 0.4), std::domain_error);
    CHECK_THROWS_AS(HurstLaw::uniform(0.0, 0.5), std::domain_error);
    CHECK_THROWS_AS(HurstLaw::uniform(0.4, 1.1), std::domain_error);
    CHECK_THROWS_AS(HurstLaw::scaled_beta(-1.0, 2.0, 0.2, 0.8), std::domain_error);
    CHECK_THROWS_AS(HurstLaw::discrete({}), std::domain_error);
    CHECK_THROWS_AS(HurstLaw::discrete({{0.5, 0.6}, {0.7, 0.6}}), std::domain_error);
    CHECK_THROWS_AS(HurstLaw::discrete({{1.2, 1.0}}), std::domain_error);
}

TEST_CASE("uniform law mean matches (a+b)/2") {
    const HurstLaw law = HurstLaw::uniform(0.4, 0.8);
    NormalRng rng(substream_seed(11, StreamDomain::hurst, 0));
    const std::int64_t n = 1'000'000;
    double sum = 0.0;
    for (std::int64_t i = 0; i < n; ++i) sum += law.sample(rng);
    const double mean = sum / static_cast<double>(n);
    const double se = (0.8 - 0.4) / std::sqrt(12.0 * static_cast<double>(n));
    CHECK(std::abs(mean - 0.6) < 4.0 * se);
}

TEST_CASE("discrete frequencies match the weights") {
    const HurstLaw law = HurstLaw::discrete({{0.3, 0.5}, {1.0, 0.5}});
    NormalRng rng(substream_seed(17, StreamDomain::hurst, 0));
    const std::int64_t n = 1'000'000;
    std::int64_t ones = 0;
    for (std::int64_t i = 0; i < n; ++i) {
        const double h = law.sample(rng);
        CHECK((h == 0.3 || h == 1.0));
        if (h == 1.0) ++ones;
    }
    const double freq = static_cast<double>(ones) / static_cast<double>(n);
    const double se = std::sqrt(0.25 / static_cast<double>(n));
    CHECK(std::abs(freq - 0.5) < 4.0 * se);
}

TEST_CASE("samples never exceed the essential supremum") {
    NormalRng rng(substream_seed(23, StreamDomain::hurst, 0));
    const HurstLaw laws[] = {
        HurstLaw::point(0.37),
        HurstLaw::uniform(0.4, 0.8),
        HurstLaw::scaled_beta(2.0, 2.0, 0.3, 0.7),
        HurstLaw::discrete({{0.3, 0.9}, {0.95, 0.1}}),
    };
    for (const auto& law : laws) {
        const double h0 = law.ess_sup();
        for (std::int64_t i = 0; i < 1'000'000; ++i) {
            const double h = law.sample(rng);
            REQUIRE(h <= h0);
            REQUIRE(h > 0.0);
        }
    }
}

TEST_CASE("mass near the essential supremum is positive when it should be") {
    NormalRng rng(substream_seed(29, StreamDomain::hurst, 0));
    const HurstLaw laws[] = {
        HurstLaw::uniform(0.4, 0.8),
        HurstLaw::scaled_beta(2.0, 2.0, 0.3, 0.7),
    };
    for (const auto& law : laws) {
        const double h0 = law.ess_sup();
        for (double eps : {0.01, 0.05}) {
            REQUIRE(law.tail_mass(h0 - eps) > 0.0);
            std::int64_t hits = 0;
            for (std::int64_t i = 0; i < 200'000; ++i) {
                if (law.sample(rng) > h0 - eps) ++hits;
            }
            CHECK(hits > 0);
        }
    }
}

TEST_CASE("scaled beta stays inside its interval and sees both halves") {
    const HurstLaw law = HurstLaw::scaled_beta(2.0, 5.0, 0.2, 0.6);
    NormalRng rng(substream_seed(31, StreamDomain::hurst, 0));
    std::int64_t lower_half = 0;
    const std::int64_t n = 100'000;
    for (std::int64_t i = 0; i < n; ++i) {
        const double h = law.sample(rng);
        REQUIRE(h >= 0.2);
        REQUIRE(h <= 0.6);
        if (h < 0.4) ++lower_half;
    }
    CHECK(lower_half > 0);
    CHECK(lower_half < n);
}
