#pragma once

namespace anisopt {

/// Two-parameter regularization (epsilon, k) plus the interpolation slack
/// delta of the truncation's transition band.
struct RegParams {
  double epsilon = 1e-3;
  double k = 8.0;
  double delta = 0.15;

  RegParams() = default;
  /// Throws std::invalid_argument on epsilon <= 0, k < 1, or delta outside
  /// [4/27, 1) (4/27 is the exact band excess of the cubic transition).
  RegParams(double epsilon_, double k_, double delta_ = 0.15);
};

/// C^1 monotone cutoff: identity on [0, k^2], constant k^2+1 above k^2+1,
/// cubic Hermite transition (slope 1 at the left end, 0 at the right) in
/// between, staying within [t, t+delta]. Throws std::domain_error for t < 0.
double truncation(double t, const RegParams& reg);

/// Derivative of truncation; nonnegative, continuous.
double truncation_derivative(double t, const RegParams& reg);

/// Regularized coefficient (epsilon + F_k(s))^((p-2)/2) at s = |A^(1/2) grad y|^2.
double reg_coefficient(double s, const RegParams& reg, double p);

/// Derivative of reg_coefficient with respect to s; nonnegative for p >= 2.
double reg_coefficient_derivative(double s, const RegParams& reg, double p);

/// Energy density Psi(s) = 1/2 * int_0^s (epsilon + F_k(tau))^((p-2)/2) dtau;
/// closed form off the transition band, fixed Gauss rule across it.
double reg_energy_density(double s, const RegParams& reg, double p);

}  // namespace anisopt
