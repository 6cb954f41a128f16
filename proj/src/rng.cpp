#include "vbpbb/rng.hpp"

#include "vbpbb/error.hpp"

#include <array>
#include <cmath>
#include <vector>

namespace vbpbb {

namespace {

constexpr std::uint32_t lo32(std::uint64_t v) { return static_cast<std::uint32_t>(v); }
constexpr std::uint32_t hi32(std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); }

}  // namespace

Rng::Rng(Seed seed, std::uint64_t stream) {
    std::seed_seq seq{lo32(seed), hi32(seed), lo32(stream), hi32(stream)};
    engine_.seed(seq);
}

std::uint64_t Rng::uniform_below(std::uint64_t bound) {
    if (bound == 0) {
        throw Error(ErrorKind::invalid_parameter, "uniform_below needs a positive bound");
    }
    // Reject the low 2^64 mod bound values so every residue is equally likely.
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        const std::uint64_t x = engine_();
        if (x >= threshold) {
            return x % bound;
        }
    }
}

double Rng::uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::standard_normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform01() - 1.0;
        v = 2.0 * uniform01() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double scale = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * scale;
    has_spare_ = true;
    return u * scale;
}

Seed derive_seed(Seed parent, std::initializer_list<std::uint64_t> path) {
    std::vector<std::uint32_t> words{lo32(parent), hi32(parent), 0x5eedu};
    for (auto key : path) {
        words.push_back(lo32(key));
        words.push_back(hi32(key));
    }
    std::seed_seq seq(words.begin(), words.end());
    std::array<std::uint32_t, 2> out{};
    seq.generate(out.begin(), out.end());
    return (static_cast<Seed>(out[1]) << 32) | out[0];
}

Seed entropy_seed() {
    std::random_device rd;
    return (static_cast<Seed>(rd()) << 32) | rd();
}

}  // namespace vbpbb
