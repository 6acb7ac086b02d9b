#ifndef RESOLV_RNG_HPP
#define RESOLV_RNG_HPP

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace resolv {

// splitmix64: used for seed expansion and derived-seed hashing. The outputs
// are well scrambled even for adjacent inputs, which is what we need when
// turning (master_seed, tag, index) into independent streams.
struct SplitMix64 {
    std::uint64_t state;

    explicit constexpr SplitMix64(std::uint64_t seed) : state(seed) {}

    constexpr std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
};

// xoshiro256++ with hand-rolled samplers. All experiment randomness flows
// through this type so results are reproducible bit-for-bit from a seed,
// independent of the standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        SplitMix64 sm(seed);
        for (auto& w : s_) w = sm.next();
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = std::rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = std::rotl(s_[3], 45);
        return result;
    }

    // uniform on [0, 1)
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // uniform on (0, 1]; safe to pass through log()
    double uniform01_open_left() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    // standard normal via Box-Muller; consumes exactly two uniforms per call
    double normal() {
        const double u1 = uniform01_open_left();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    // Rayleigh amplitude with E[h^2] = mean_square
    double rayleigh(double mean_square) {
        return std::sqrt(-mean_square * std::log(uniform01_open_left()));
    }

private:
    std::array<std::uint64_t, 4> s_{};
};

// Derived seed for an independent sub-stream: hash(master, tag, index).
// Order-free: any task may compute its own seed without coordination.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view tag,
                                 std::uint64_t index) {
    std::uint64_t h = 0xcbf29ce484222325ULL; // FNV-1a over the tag
    for (unsigned char c : tag) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    SplitMix64 sm(master ^ h);
    sm.next();
    sm.state += index * 0x9e3779b97f4a7c15ULL;
    return sm.next();
}

} // namespace resolv

#endif
