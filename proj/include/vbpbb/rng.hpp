#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace vbpbb {

using Seed = std::uint64_t;

/// Identity of the random stream algorithm, recorded in every output for audit.
/// Bump the version whenever the draw sequence for a given seed would change.
inline constexpr std::string_view kRngName = "mt19937_64+seed_seq";
inline constexpr int kRngVersion = 1;

/**
 * Seeded random stream.
 *
 * The engine is std::mt19937_64 initialized through std::seed_seq; both are
 * fully specified by the C++ standard. The standard library distributions are
 * not, so integer and normal draws are implemented here to keep every draw
 * sequence identical across toolchains.
 */
class Rng {
public:
    /// Stream `stream` of the family keyed by `seed`.
    Rng(Seed seed, std::uint64_t stream);

    [[nodiscard]] std::uint64_t next() { return engine_(); }
    /// Uniform integer in [0, bound) by rejection; bound must be >= 1.
    [[nodiscard]] std::uint64_t uniform_below(std::uint64_t bound);
    /// Uniform double in [0, 1) with 53 random bits.
    [[nodiscard]] double uniform01();
    /// Standard normal via the Marsaglia polar method.
    [[nodiscard]] double standard_normal();

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Child seed for the given key path. Distinct paths give unrelated seeds.
[[nodiscard]] Seed derive_seed(Seed parent, std::initializer_list<std::uint64_t> path);

/// Fresh seed from std::random_device for runs that were not given one.
[[nodiscard]] Seed entropy_seed();

}  // namespace vbpbb
