#pragma once

#include <cstdint>

namespace vldcop {

// Counter-free deterministic generator (splitmix64 core). We avoid
// std::uniform_int_distribution because its output is not specified by the
// standard; all draws here are bit-identical across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t state) : state_(state) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n) via 128-bit multiply-shift.
  std::uint32_t below(std::uint32_t n) {
    return static_cast<std::uint32_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }

  // Uniform in [0, 1) with 53 bits of precision.
  double u01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

// Stream tags keep the independent random streams of a run from colliding.
enum class StreamTag : std::uint64_t {
  Init = 1,
  Branch = 2,       // epsilon branch draws, one per owned variable
  RandomValue = 3,  // random value draws for the epsilon branch
  Baseline = 4,     // random-baseline resampling
  Graph = 5,
  GroundTruth = 6,
  Instruction = 7,
  Noise = 8,
  Drop = 9,
  Delay = 10,
  Meeting = 11,
  Fallback = 12,
};

inline std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives an independent stream from (seed, tag, a, b). Every random decision
// in a run names its stream explicitly so that adding draws in one place never
// perturbs another.
inline Rng stream(std::uint64_t seed, StreamTag tag, std::uint64_t a = 0,
                  std::uint64_t b = 0) {
  return Rng(mix(mix(mix(seed, static_cast<std::uint64_t>(tag)), a), b));
}

}  // namespace vldcop
