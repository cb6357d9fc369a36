#pragma once

#include <array>
#include <cstdint>

namespace ouocc {

/**
 * Philox4x32-10 counter-based generator (Salmon et al., SC'11).
 *
 * Maps a 128-bit counter and a 64-bit key to 128 random bits with no
 * internal state, so any draw can be addressed directly.
 */
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    explicit Philox4x32(std::uint64_t key) noexcept
        : key_{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)} {}

    Counter operator()(Counter ctr) const noexcept;

private:
    Key key_;
};

/**
 * Standard normal variates addressed by (seed, stream, index).
 *
 * Draws 2k and 2k+1 come from one Philox block with counter
 * (k, stream) via the Box-Muller transform on two 53-bit uniforms.
 * The result of normal(i) depends only on (seed, stream, i): it does not
 * depend on call order, thread, or how many other draws were made.
 */
class GaussianStream {
public:
    GaussianStream(std::uint64_t seed, std::uint64_t stream) noexcept
        : philox_(seed), stream_(stream) {}

    double normal(std::uint64_t index) const noexcept;

    /// Both normals of block k: indices 2k and 2k+1.
    std::array<double, 2> normal_pair(std::uint64_t block) const noexcept;

private:
    Philox4x32 philox_;
    std::uint64_t stream_;
};

}  // namespace ouocc
