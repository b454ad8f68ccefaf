#pragma once

#include <cmath>
#include <cstdint>

namespace depthaudit {

// splitmix64: the documented, cross-language reproducible generator behind
// every synthetic dataset. Per-view streams are derived with derive().
class SplitMix64 {
  public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() {
        uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in (0, 1]; never returns 0 so it is safe inside log().
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * (1.0 / 9007199254740992.0);
    }

    // Box-Muller transform, one draw per call (the paired value is dropped to
    // keep the stream position independent of call parity).
    double next_gaussian() {
        const double u1 = next_uniform();
        const double u2 = next_uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    // Independent substream for (seed, index) pairs.
    static SplitMix64 derive(uint64_t seed, uint64_t index) {
        SplitMix64 mixer(seed ^ (0xA5A5A5A55A5A5A5Aull + index * 0x9E3779B97F4A7C15ull));
        return SplitMix64(mixer.next_u64());
    }

  private:
    uint64_t state_;
};

} // namespace depthaudit
