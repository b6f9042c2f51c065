#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace glyphgrow {

// splitmix64 step: advances the state and returns the next output.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// First splitmix64 output for a given seed, as a pure function.
inline std::uint64_t splitmix64_at(std::uint64_t seed) {
    return splitmix64_next(seed);
}

// Deterministic RNG stream. All randomness in the library (weight init,
// sampling, shuffling) is drawn from streams derived from one run seed.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() { return splitmix64_next(state_); }

    // Uniform in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    float next_float() { return static_cast<float>(next_double()); }

    // Uniform integer in [0, n).
    std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

    // Standard normal via Box-Muller; pairs are cached for determinism.
    double next_normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        while (u1 <= 0.0) u1 = next_double();
        double u2 = next_double();
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 6.283185307179586476925287 * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    float next_normal(float mean, float stddev) {
        return mean + stddev * static_cast<float>(next_normal());
    }

    // Derives an independent child stream from this seed and a label.
    static Rng derive(std::uint64_t seed, std::string_view label) {
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (char c : label) {
            h ^= static_cast<unsigned char>(c);
            h *= 0x100000001b3ull;
        }
        std::uint64_t s = seed ^ h;
        // one mixing round so adjacent seeds do not give adjacent streams
        return Rng(splitmix64_at(s));
    }

  private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace glyphgrow
