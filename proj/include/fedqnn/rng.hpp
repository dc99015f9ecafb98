#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace fedqnn {

// Seeded RNG with hand-rolled draw helpers so that sampled values depend only
// on the mt19937_64 stream, not on the standard library's distribution
// implementations. Same seed => same bytes out, everywhere.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53 bits of precision.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n). Rejection-free modulo is fine here: n is
    // always tiny compared to 2^64, so the bias is far below observability.
    std::uint64_t uniform_index(std::uint64_t n) { return engine_() % n; }

    // Marsaglia polar would cache state; Box-Muller keeps the stream simple.
    double normal(double mean = 0.0, double stddev = 1.0) {
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        double z = std::sqrt(-2.0 * std::log(u1)) *
                   std::cos(2.0 * 3.14159265358979323846 * u2);
        return mean + stddev * z;
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[uniform_index(i)]);
        }
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace fedqnn
