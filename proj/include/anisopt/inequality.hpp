#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "anisopt/truncation.hpp"

namespace anisopt {

/// Result of one randomized inequality check; the violation is a signed
/// margin (min over samples), so near-violations stay visible in reports.
struct PropertyCase {
  std::string name;
  int sample_count = 0;
  double tolerance = 1e-12;
  double worst_violation = 0.0;
  bool passed = false;
  std::uint64_t seed = 0;
};

/// ((eps+F_k(|a|^2))^((p-2)/2) a - (eps+F_k(|b|^2))^((p-2)/2) b, a-b)
///   >= eps^((p-2)/2) |a-b|^2 on random planar vectors with |a|,|b| <= 3k.
PropertyCase check_regularized_monotonicity(double p, const RegParams& reg, int samples,
                                            std::uint64_t seed);

/// (|a|^(p-2) a - |b|^(p-2) b)(a-b) >= 2^(2-p) |a-b|^p on random scalars.
PropertyCase check_power_monotonicity(double p, int samples, std::uint64_t seed);

/// (eps+z^2)^r <= 2^(r-1)(eps^r + z^(2r)) for r >= 1,
/// (eps+z^2)^r <= eps^r + z^(2r) for 0 < r < 1.
PropertyCase check_bracket_bounds(int samples, std::uint64_t seed);

/// Spectral <= Frobenius <= sqrt(N) * spectral on random symmetric 2x2.
PropertyCase check_norm_equivalence(int samples, std::uint64_t seed);

/// Truncation contract: identity below k^2, constant above k^2+1, value in
/// [t, t+delta] on the band, nonnegative derivative matching central
/// differences to 1e-6, C^1 at the junctions.
PropertyCase check_truncation_contract(const RegParams& reg, int samples, std::uint64_t seed);

/// The five checks above with the default fixtures and 10^4 samples each.
std::vector<PropertyCase> default_battery(std::uint64_t seed);

}  // namespace anisopt
