#include "anisopt/inequality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "anisopt/rng.hpp"
#include "anisopt/smallmat.hpp"

namespace anisopt {

namespace {

PropertyCase make_case(std::string name, int samples, std::uint64_t seed, double tolerance = 1e-12) {
  PropertyCase pc;
  pc.name = std::move(name);
  pc.sample_count = samples;
  pc.tolerance = tolerance;
  pc.seed = seed;
  pc.worst_violation = std::numeric_limits<double>::infinity();
  return pc;
}

void finish(PropertyCase& pc) { pc.passed = pc.worst_violation >= -pc.tolerance; }

double power_term(double v, double p) { return v == 0.0 ? 0.0 : std::pow(std::abs(v), p - 2.0) * v; }

}  // namespace

PropertyCase check_regularized_monotonicity(double p, const RegParams& reg, int samples,
                                            std::uint64_t seed) {
  PropertyCase pc = make_case("regularized-monotonicity", samples, seed);
  Rng rng(seed);
  const double rhs_coeff = std::pow(reg.epsilon, 0.5 * (p - 2.0));
  for (int s = 0; s < samples; ++s) {
    const double ra = rng.uniform(0.0, 3.0 * reg.k), pa = rng.uniform(0.0, 2.0 * M_PI);
    const double rb = rng.uniform(0.0, 3.0 * reg.k), pb = rng.uniform(0.0, 2.0 * M_PI);
    const Vec2 a{ra * std::cos(pa), ra * std::sin(pa)};
    const Vec2 b{rb * std::cos(pb), rb * std::sin(pb)};
    const double ca = reg_coefficient(dot(a, a), reg, p);
    const double cb = reg_coefficient(dot(b, b), reg, p);
    const Vec2 diff{a[0] - b[0], a[1] - b[1]};
    const Vec2 flux{ca * a[0] - cb * b[0], ca * a[1] - cb * b[1]};
    pc.worst_violation = std::min(pc.worst_violation, dot(flux, diff) - rhs_coeff * dot(diff, diff));
  }
  finish(pc);
  return pc;
}

PropertyCase check_power_monotonicity(double p, int samples, std::uint64_t seed) {
  PropertyCase pc = make_case("power-monotonicity", samples, seed);
  Rng rng(seed);
  for (int s = 0; s < samples; ++s) {
    const double a = rng.uniform(-3.0, 3.0);
    const double b = rng.uniform(-3.0, 3.0);
    const double lhs = (power_term(a, p) - power_term(b, p)) * (a - b);
    const double rhs = std::pow(2.0, 2.0 - p) * std::pow(std::abs(a - b), p);
    pc.worst_violation = std::min(pc.worst_violation, lhs - rhs);
  }
  finish(pc);
  return pc;
}

PropertyCase check_bracket_bounds(int samples, std::uint64_t seed) {
  PropertyCase pc = make_case("bracket-bounds", samples, seed);
  Rng rng(seed);
  for (int s = 0; s < samples; ++s) {
    const double eps = rng.uniform(1e-6, 2.0);
    const double z = rng.uniform(-3.0, 3.0);
    const double r = rng.uniform(1e-3, 3.0);
    const double lhs = std::pow(eps + z * z, r);
    const double rhs = r >= 1.0
                           ? std::pow(2.0, r - 1.0) * (std::pow(eps, r) + std::pow(z * z, r))
                           : std::pow(eps, r) + std::pow(z * z, r);
    pc.worst_violation = std::min(pc.worst_violation, rhs - lhs);
  }
  finish(pc);
  return pc;
}

PropertyCase check_norm_equivalence(int samples, std::uint64_t seed) {
  PropertyCase pc = make_case("norm-equivalence", samples, seed);
  Rng rng(seed);
  for (int s = 0; s < samples; ++s) {
    const SymMat m{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
    const double spec = m.spectral_norm(2);
    const double fro = m.frobenius(2);
    pc.worst_violation =
        std::min({pc.worst_violation, fro - spec, std::sqrt(2.0) * spec - fro});
  }
  finish(pc);
  return pc;
}

PropertyCase check_truncation_contract(const RegParams& reg, int samples, std::uint64_t seed) {
  PropertyCase pc = make_case("truncation-contract", samples, seed);
  Rng rng(seed);
  const double k2 = reg.k * reg.k;
  const double fd_h = 1e-6;

  auto visit = [&](double t) {
    const double f = truncation(t, reg);
    if (t <= k2) {
      pc.worst_violation = std::min(pc.worst_violation, -std::abs(f - t));
    } else if (t >= k2 + 1.0) {
      pc.worst_violation = std::min(pc.worst_violation, -std::abs(f - (k2 + 1.0)));
    } else {
      pc.worst_violation = std::min({pc.worst_violation, f - t, t + reg.delta - f});
    }
    const double d = truncation_derivative(t, reg);
    pc.worst_violation = std::min(pc.worst_violation, d);
    // central-difference agreement away from the C^1 junctions, where the
    // second derivative jumps and the difference quotient is only O(h)-accurate
    if (t > 10.0 * fd_h && std::abs(t - k2) > 10.0 * fd_h &&
        std::abs(t - (k2 + 1.0)) > 10.0 * fd_h) {
      const double fd = (truncation(t + fd_h, reg) - truncation(t - fd_h, reg)) / (2.0 * fd_h);
      pc.worst_violation = std::min(pc.worst_violation, 1e-6 - std::abs(d - fd));
    }
  };

  // dense pass over the transition band, then random coverage of all regimes
  const int band = std::min(samples / 10, 1000);
  for (int i = 0; i < band; ++i) visit(k2 + (i + 0.5) / band);
  for (int s = band; s < samples; ++s) visit(rng.uniform(0.0, k2 + 3.0));

  // C^1 junctions: derivative 1 from both sides at k^2, 0 at k^2+1
  pc.worst_violation = std::min(pc.worst_violation, -std::abs(truncation_derivative(k2, reg) - 1.0));
  pc.worst_violation =
      std::min(pc.worst_violation, -std::abs(truncation_derivative(k2 + 1.0, reg)));
  finish(pc);
  return pc;
}

std::vector<PropertyCase> default_battery(std::uint64_t seed) {
  const RegParams reg(0.01, 2.0, 0.15);
  std::vector<PropertyCase> battery;
  battery.push_back(check_regularized_monotonicity(4.0, reg, 10000, seed + 1));
  // cycle p over {2.5, 3, 4}: one case, samples split evenly
  {
    PropertyCase merged = make_case("power-monotonicity", 10000, seed + 2);
    int remaining = 10000;
    for (double p : {2.5, 3.0, 4.0}) {
      const int chunk = p == 4.0 ? remaining : 10000 / 3;
      const PropertyCase pc = check_power_monotonicity(p, chunk, seed + 2);
      merged.worst_violation = std::min(merged.worst_violation, pc.worst_violation);
      remaining -= chunk;
    }
    finish(merged);
    battery.push_back(merged);
  }
  battery.push_back(check_bracket_bounds(10000, seed + 3));
  battery.push_back(check_norm_equivalence(10000, seed + 4));
  battery.push_back(check_truncation_contract(reg, 10000, seed + 5));
  return battery;
}

}  // namespace anisopt
