// Deterministic random-number utilities: one root seed fans out into named
// substreams so every component (device noise, masks, training shuffles) is
// independently reproducible.
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string_view>

namespace memrc {

// FNV-1a 64-bit hash; used for substream naming and config hashing.
inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Seeded generator with portable uniform/normal draws (no reliance on
// implementation-defined std::distribution algorithms, so goldens frozen in
// tests stay valid across standard libraries).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // Uniform on (0,1]: never zero, so log() in the normal draw is safe.
    double uniform_open() {
        return static_cast<double>((eng_() >> 11) + 1) * 0x1.0p-53;
    }

    // Uniform on [0,1).
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Box-Muller (cosine branch only), fully specified arithmetic.
    double normal() {
        const double u1 = uniform_open();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }

    double normal(double mean, double sigma) { return mean + sigma * normal(); }

    // Uniform integer in [lo, hi] via rejection-free Lemire-style reduction;
    // bias is negligible for the ranges used here (shuffles, ids).
    std::uint64_t uniform_int(std::uint64_t n) {  // in [0, n)
        return static_cast<std::uint64_t>(uniform() * static_cast<double>(n));
    }

    std::mt19937_64& engine() { return eng_; }

  private:
    std::mt19937_64 eng_;
};

// Derives a substream seed from (root, name, a, b). Used as
// substream(root, "volatile-d2d", device_id) etc.
inline Rng substream(std::uint64_t root, std::string_view name,
                     std::uint64_t a = 0, std::uint64_t b = 0) {
    std::uint64_t s = splitmix64(root ^ fnv1a(name));
    s = splitmix64(s ^ (0x9e3779b97f4a7c15ull * (a + 1)));
    s = splitmix64(s ^ (0xc2b2ae3d27d4eb4full * (b + 1)));
    return Rng(s);
}

// Deterministic Fisher-Yates shuffle driven by the portable uniform draws.
template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        const std::size_t j =
            static_cast<std::size_t>(rng.uniform_int(static_cast<std::uint64_t>(i)));
        std::swap(v[i - 1], v[j]);
    }
}

}  // namespace memrc
