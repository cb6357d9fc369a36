#include "doctest.h"

#include <cmath>
#include <cstdint>

#include "ouocc/rng.hpp"

using ouocc::GaussianStream;
using ouocc::Philox4x32;

// Known-answer vectors from the Random123 distribution (kat_vectors).
TEST_CASE("philox4x32-10 known answers") {
    {
        const Philox4x32 gen(0);
        const auto r = gen({0, 0, 0, 0});
        CHECK(r == Philox4x32::Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    }
    {
        const Philox4x32 gen(0xffffffffffffffffull);
        const auto r = gen({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu});
        CHECK(r == Philox4x32::Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
    }
    {
        const Philox4x32 gen(0x299f31d0a4093822ull);
        const auto r = gen({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u});
        CHECK(r == Philox4x32::Counter{0xd16cfe09u, 0x94fdcceb, 0x5001e420u, 0x24126ea1u});
    }
}

TEST_CASE("gaussian stream is addressable and order independent") {
    const GaussianStream s(42, 7);
    const double late = s.normal(1001);
    const double early = s.normal(3);
    CHECK(s.normal(3) == early);
    CHECK(s.normal(1001) == late);
    const auto pair = s.normal_pair(500);
    CHECK(pair[0] == s.normal(1000));
    CHECK(pair[1] == late);

    CHECK(GaussianStream(42, 8).normal(3) != early);
    CHECK(GaussianStream(43, 7).normal(3) != early);
}

TEST_CASE("gaussian stream moments") {
    const GaussianStream s(2024, 0);
    constexpr int n = 200000;
    double sum = 0.0, sum2 = 0.0, sum4 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = s.normal(static_cast<std::uint64_t>(i));
        REQUIRE(std::isfinite(z));
        sum += z;
        sum2 += z * z;
        sum4 += z * z * z * z;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    // standard errors: 1/sqrt(n), sqrt(2/n), sqrt(96/n)
    CHECK(std::abs(mean) < 4.0 / std::sqrt(n));
    CHECK(std::abs(var - 1.0) < 4.0 * std::sqrt(2.0 / n));
    CHECK(std::abs(sum4 / n - 3.0) < 4.0 * std::sqrt(96.0 / n));
}
