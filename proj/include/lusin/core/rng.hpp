#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace lusin {

/// splitmix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Labelled sub-stream seed: each sampler derives its own seed from the master
/// seed and a fixed label, so adding a sampler never perturbs the others.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::string_view label) {
    std::uint64_t h = 1469598103934665603ull;
    for (char c : label) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return mix64(master ^ h);
}

/// mt19937_64 with platform-independent real draws.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    Rng(std::uint64_t master, std::string_view label) : eng_(derive_seed(master, label)) {}

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Log-uniform in [lo, hi], lo > 0.
    double log_uniform(double lo, double hi);
    /// Standard normal via Box-Muller.
    double normal();
    std::uint64_t next() { return eng_(); }
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n; }

private:
    std::mt19937_64 eng_;
};

}  // namespace lusin
