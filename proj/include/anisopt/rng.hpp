#pragma once

#include <cstdint>
#include <random>

namespace anisopt {

/// Seeded generator with a portable uniform-double extraction (the raw
/// engine stream is standardized; distributions are not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }  // [0,1)
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace anisopt
