#pragma once
// Seeded random streams. Each trial seed is split into independent per-concern
// streams so that e.g. swapping the controller never perturbs scene generation.

#include <cmath>
#include <cstdint>
#include <random>

namespace frdw {

enum class RngStream : std::uint64_t { scene = 1, poses = 2, targets = 3, predictor = 4, test = 99 };

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// mt19937_64 with library-independent conversions (the std distributions are
/// implementation-defined, which would break byte-level reproducibility).
class Rng {
 public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}
    Rng(std::uint64_t seed, RngStream stream)
        : engine_(splitmix64(splitmix64(seed) ^ splitmix64(static_cast<std::uint64_t>(stream) * 0xD1B54A32D192ED03ull))) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [lo, hi].
    int uniform_int(int lo, int hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        // Rejection keeps the draw unbiased.
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        std::uint64_t v;
        do v = engine_(); while (v >= limit);
        return lo + static_cast<int>(v % span);
    }

    /// Standard normal via the polar Box-Muller method (one value per call).
    double normal() {
        double u, v, s;
        do {
            u = uniform(-1.0, 1.0);
            v = uniform(-1.0, 1.0);
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        return u * std::sqrt(-2.0 * std::log(s) / s);
    }
    double normal(double mean, double sd) { return mean + sd * normal(); }

 private:
    std::mt19937_64 engine_;
};

}  // namespace frdw
