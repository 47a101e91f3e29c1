#pragma once

#include <cstdint>
#include <random>

namespace urboot {

/// splitmix64 finalizer; used to derive independent stream seeds.
[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Random source with platform-independent output.
///
/// std::mt19937_64 is bit-specified by the standard; the distributions are not,
/// so uniform integers and normals are derived here by hand. A stream is keyed
/// by (master seed, tag, index) so that bootstrap replication b draws the same
/// numbers no matter which thread runs it or in which order.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    [[nodiscard]] static Rng stream(std::uint64_t master, std::uint64_t tag, std::uint64_t index) {
        return Rng(mix64(mix64(mix64(master) ^ tag) ^ (index + 0x632BE59BD9B4E019ULL)));
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on {0, ..., n - 1}; rejection sampling, no modulo bias.
    std::size_t index(std::size_t n) {
        const std::uint64_t range = static_cast<std::uint64_t>(n);
        const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % range);
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return static_cast<std::size_t>(x % range);
    }

    /// Standard normal via the Marsaglia polar method.
    double normal();

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace urboot
