#pragma once

#include <cmath>
#include <cstdint>

namespace resrisk {

// xoshiro256++ seeded through SplitMix64. A stream is identified by
// (master, stream, phase); replicate j of a simulation takes stream = j and
// one phase per purpose (triangle, diagonal, one per method), which keeps
// results independent of thread scheduling.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) { init(seed, 0, 0); }

  RngStream(std::uint64_t master, std::uint64_t stream, std::uint64_t phase) {
    init(master, stream, phase);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform draw in (0,1); never returns 0 so log() stays finite.
  double next_uniform() {
    const double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    return u > 0.0 ? u : 0x1.0p-53;
  }

  // Standard normal via Box-Muller on explicit uniforms. std::normal_distribution
  // is implementation-defined, which would break seed-stable results.
  double next_normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // Uniform integer in [0, bound); bound must be positive. The modulo bias is
  // below 2^-57 for the bounds used here (residue pools, scenario counts).
  std::uint64_t next_below(std::uint64_t bound) { return next_u64() % bound; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  static std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  void init(std::uint64_t master, std::uint64_t stream, std::uint64_t phase) {
    std::uint64_t x = mix64(master + 0x9E3779B97F4A7C15ULL);
    x = mix64(x + stream + 0x9E3779B97F4A7C15ULL);
    x = mix64(x + phase + 0x9E3779B97F4A7C15ULL);
    for (auto& w : s_) {
      x += 0x9E3779B97F4A7C15ULL;
      w = mix64(x);
    }
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
  }

  std::uint64_t s_[4];
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace resrisk
