#pragma once

#include <cstdint>
#include <random>

namespace wmcs {

// SplitMix64 finalizer. Used to derive independent stream seeds from a
// master seed plus stream coordinates.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                    std::uint64_t b = 0) {
  return mix_seed(mix_seed(mix_seed(master) ^ a) ^ b);
}

// Per-call random stream. Every variate is produced from the raw 64-bit
// engine output by explicit transforms, so sequences are identical across
// standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on the open interval (0, 1).
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double standard_normal();

  // Gamma(shape, 1) by Marsaglia and Tsang, with the shape < 1 boost.
  double standard_gamma(double shape);

 private:
  std::mt19937_64 engine_;
};

}  // namespace wmcs
