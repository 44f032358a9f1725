#include "anisopt/truncation.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace anisopt {

namespace {

// Hermite transition on s = t - k^2 in [0,1]: h(0)=0, h'(0)=1, h(1)=1, h'(1)=0.
// h(s) = -s^3 + s^2 + s; excess h(s)-s = s^2(1-s) peaks at 4/27.
constexpr double kBandExcess = 4.0 / 27.0;

double hermite(double s) { return ((-s + 1.0) * s + 1.0) * s; }
double hermite_prime(double s) { return (-3.0 * s + 2.0) * s + 1.0; }

// 16-point Gauss-Legendre nodes/weights on [-1,1].
constexpr std::array<double, 8> kGlX = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274, 0.6178762444026438,
    0.7554044083550030, 0.8656312023878318, 0.9445750230732326, 0.9894009349916499};
constexpr std::array<double, 8> kGlW = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};

double integrate_band(double a, double b, const RegParams& reg, double p) {
  // int_a^b (eps + F_k(t))^((p-2)/2) dt with [a,b] inside the transition band
  const double r = 0.5 * (p - 2.0);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double tp = mid + half * kGlX[i];
    const double tm = mid - half * kGlX[i];
    sum += kGlW[i] * (std::pow(reg.epsilon + truncation(tp, reg), r) +
                      std::pow(reg.epsilon + truncation(tm, reg), r));
  }
  return half * sum;
}

}  // namespace

RegParams::RegParams(double epsilon_, double k_, double delta_)
    : epsilon(epsilon_), k(k_), delta(delta_) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("RegParams: epsilon must be positive");
  if (!(k >= 1.0)) throw std::invalid_argument("RegParams: truncation level k must be >= 1");
  if (!(delta < 1.0) || !(delta >= kBandExcess))
    throw std::invalid_argument("RegParams: delta must lie in [4/27, 1)");
}

double truncation(double t, const RegParams& reg) {
  if (t < 0.0) throw std::domain_error("truncation: argument must be nonnegative");
  const double k2 = reg.k * reg.k;
  if (t <= k2) return t;
  if (t >= k2 + 1.0) return k2 + 1.0;
  return k2 + hermite(t - k2);
}

double truncation_derivative(double t, const RegParams& reg) {
  if (t < 0.0) throw std::domain_error("truncation: argument must be nonnegative");
  const double k2 = reg.k * reg.k;
  if (t <= k2) return 1.0;
  if (t >= k2 + 1.0) return 0.0;
  return hermite_prime(t - k2);
}

double reg_coefficient(double s, const RegParams& reg, double p) {
  return std::pow(reg.epsilon + truncation(s, reg), 0.5 * (p - 2.0));
}

double reg_coefficient_derivative(double s, const RegParams& reg, double p) {
  const double r = 0.5 * (p - 2.0);
  if (r == 0.0) return 0.0;
  return r * std::pow(reg.epsilon + truncation(s, reg), r - 1.0) * truncation_derivative(s, reg);
}

double reg_energy_density(double s, const RegParams& reg, double p) {
  const double r = 0.5 * (p - 2.0);
  const double k2 = reg.k * reg.k;
  const double eps = reg.epsilon;
  // antiderivative of (eps+t)^r is (eps+t)^(r+1)/(r+1)
  auto plain = [&](double a, double b) {
    return (std::pow(eps + b, r + 1.0) - std::pow(eps + a, r + 1.0)) / (r + 1.0);
  };
  double integral;
  if (s <= k2) {
    integral = plain(0.0, s);
  } else if (s <= k2 + 1.0) {
    integral = plain(0.0, k2) + integrate_band(k2, s, reg, p);
  } else {
    integral = plain(0.0, k2) + integrate_band(k2, k2 + 1.0, reg, p) +
               std::pow(eps + k2 + 1.0, r) * (s - k2 - 1.0);
  }
  return 0.5 * integral;
}

}  // namespace anisopt
