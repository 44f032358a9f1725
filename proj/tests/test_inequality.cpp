#include <cmath>

#include "anisopt/inequality.hpp"
#include "anisopt/smallmat.hpp"
#include "doctest.h"

using namespace anisopt;

TEST_CASE("default battery passes") {
  const auto battery = default_battery(42);
  REQUIRE(battery.size() == 5);
  for (const auto& pc : battery) {
    INFO(pc.name);
    CHECK(pc.passed);
    CHECK(pc.worst_violation >= -1e-12);
    CHECK(pc.sample_count == 10000);
  }
}

TEST_CASE("battery is reproducible for a fixed seed") {
  const auto a = default_battery(17);
  const auto b = default_battery(17);
  const auto c = default_battery(18);
  REQUIRE(a.size() == b.size());
  bool any_difference = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].worst_violation == b[i].worst_violation);
    if (a[i].worst_violation != c[i].worst_violation) any_difference = true;
  }
  CHECK(any_difference);  // different seed, different samples
}

TEST_CASE("regularized monotonicity equality cases") {
  const RegParams reg(0.01, 2.0);
  // a = b: the expression vanishes
  const Vec2 a{1.2, -0.4};
  const double ca = reg_coefficient(dot(a, a), reg, 4.0);
  const Vec2 flux{ca * a[0] - ca * a[0], ca * a[1] - ca * a[1]};
  CHECK(dot(flux, a) == 0.0);

  // p = 2: the bracket power is zero, so the margin is identically
  // |a-b|^2 - |a-b|^2 = 0
  const PropertyCase pc = check_regularized_monotonicity(2.0, reg, 2000, 5);
  CHECK(pc.passed);
  CHECK(std::abs(pc.worst_violation) < 1e-12);
}

TEST_CASE("power monotonicity equality at a = -b, p = 4") {
  // lhs = (1 - (-1)) * 2 = 4, rhs = 2^(2-4) * 2^4 = 4
  const double a = 1.0, b = -1.0, p = 4.0;
  const double lhs = (std::pow(std::abs(a), p - 2.0) * a - std::pow(std::abs(b), p - 2.0) * b) * (a - b);
  const double rhs = std::pow(2.0, 2.0 - p) * std::pow(std::abs(a - b), p);
  CHECK(lhs == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(rhs == doctest::Approx(4.0).epsilon(1e-15));

  for (double pp : {2.5, 3.0, 4.0}) CHECK(check_power_monotonicity(pp, 10000, 11).passed);
  // p = 2 reduces to an exact identity
  const PropertyCase linear = check_power_monotonicity(2.0, 2000, 11);
  CHECK(std::abs(linear.worst_violation) < 1e-12);
}

TEST_CASE("bracket bound equality cases") {
  // r = 1: both sides equal eps + z^2
  const double eps = 0.3, z = 1.7;
  CHECK(std::pow(eps + z * z, 1.0) == doctest::Approx(eps + z * z).epsilon(1e-15));
  CHECK(check_bracket_bounds(10000, 23).passed);
}

TEST_CASE("norm equivalence landmarks") {
  const SymMat identity = SymMat::identity(2);
  CHECK(identity.spectral_norm(2) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(identity.frobenius(2) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));

  // rank one: spectral equals Frobenius
  const Vec2 eta{0.6, -0.8};
  const SymMat rank1{eta[0] * eta[0], eta[0] * eta[1], eta[1] * eta[1]};
  CHECK(rank1.spectral_norm(2) == doctest::Approx(rank1.frobenius(2)).epsilon(1e-12));

  CHECK(check_norm_equivalence(10000, 31).passed);
}

TEST_CASE("truncation contract details") {
  const RegParams reg(0.01, 2.0, 0.15);
  CHECK(check_truncation_contract(reg, 10000, 37).passed);

  // junction landmarks
  const double k2 = reg.k * reg.k;
  CHECK(truncation(k2, reg) == k2);
  CHECK(truncation(k2 + 2.0, reg) == k2 + 1.0);
  CHECK(truncation_derivative(k2, reg) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(truncation_derivative(k2 + 1.0, reg) == doctest::Approx(0.0).epsilon(1e-14));
}
