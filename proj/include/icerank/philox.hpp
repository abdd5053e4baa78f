#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace icerank {

/// Philox4x32-10 counter-based generator.
///
/// A block of four 32-bit words is a pure function of (counter, key), which
/// makes draw i of a stream computable without touching draws 0..i-1.
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr Counter block(Counter ctr, Key key) noexcept {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
                   static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
                   static_cast<std::uint32_t>(p0)};
        }
        return ctr;
    }

private:
    static constexpr std::uint32_t kMul0 = 0xD2511F53;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85;
};

/// Per-scenario substream: the draws for scenario `index` under `seed` are
/// Philox(counter = {index_lo, index_hi, 0, 0}, key = {seed_lo, seed_hi}).
/// They never depend on evaluation order or worker count.
class SeededStream {
public:
    explicit constexpr SeededStream(std::uint64_t seed) noexcept : seed_(seed) {}

    constexpr std::uint64_t seed() const noexcept { return seed_; }

    struct Draw {
        double u1;  // uniform on (0, 1)
        double u2;  // uniform on (0, 1)
    };

    constexpr Draw uniforms(std::uint64_t index) const noexcept {
        const auto words = Philox4x32::block(
            {static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), 0u, 0u},
            {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)});
        const std::uint64_t a = (std::uint64_t{words[0]} << 32) | words[1];
        const std::uint64_t b = (std::uint64_t{words[2]} << 32) | words[3];
        return {to_open_unit(a), to_open_unit(b)};
    }

    /// Standard normal by the Box-Muller cosine branch.
    double normal(std::uint64_t index) const {
        const Draw d = uniforms(index);
        return std::sqrt(-2.0 * std::log(d.u1)) * std::cos(2.0 * std::numbers::pi * d.u2);
    }

private:
    // Top 53 bits, centered in their cell: never exactly 0 or 1.
    static constexpr double to_open_unit(std::uint64_t bits) noexcept {
        return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
    }

    std::uint64_t seed_;
};

}  // namespace icerank
