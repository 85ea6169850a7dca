#pragma once

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

namespace aprelax {

/// Raised when a state value leaves the domain where a law is defined.
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class LawKind {
  PSystemPressure,  ///< p(tau) = tau^-gamma, argument is the specific volume
  EulerPressure,    ///< p(rho) = rho^gamma
  LinearGT,         ///< p(rho) = rho
  ViscoStress,      ///< gamma(u) = u + u^3
};

/**
 * Pressure (or stress) law together with its derivatives and its
 * antiderivative P(s) = int_{tau_star}^{s} p.
 *
 * The positive-argument laws reject non-positive input with a domain_error
 * that carries the offending value. ViscoStress is defined on the whole line.
 */
struct ConstitutiveLaw {
  LawKind kind = LawKind::PSystemPressure;
  double gamma = 1.4;
  double tau_star = 1.0;

  static constexpr ConstitutiveLaw psystem(double gamma = 1.4, double tau_star = 1.0) {
    return {LawKind::PSystemPressure, gamma, tau_star};
  }
  static constexpr ConstitutiveLaw euler(double gamma = 1.4, double tau_star = 1.0) {
    return {LawKind::EulerPressure, gamma, tau_star};
  }
  static constexpr ConstitutiveLaw linear(double tau_star = 0.0) {
    return {LawKind::LinearGT, 1.0, tau_star};
  }
  static constexpr ConstitutiveLaw visco() { return {LawKind::ViscoStress, 1.0, 0.0}; }

  [[nodiscard]] constexpr bool needs_positive_argument() const {
    return kind == LawKind::PSystemPressure || kind == LawKind::EulerPressure;
  }
};

namespace detail {

inline void require_positive(const ConstitutiveLaw& law, double s, const char* what) {
  if (law.needs_positive_argument() && !(s > 0.0)) {
    std::ostringstream msg;
    msg << what << ": argument must be positive, got " << s;
    throw domain_error(msg.str());
  }
}

// Antiderivative of s^-gamma up to a constant, with the gamma = 1 branch.
inline double power_primitive(double s, double exponent) {
  if (exponent == -1.0) return std::log(s);
  return std::pow(s, exponent + 1.0) / (exponent + 1.0);
}

}  // namespace detail

inline double pressure(const ConstitutiveLaw& law, double s) {
  detail::require_positive(law, s, "pressure");
  switch (law.kind) {
    case LawKind::PSystemPressure: return std::pow(s, -law.gamma);
    case LawKind::EulerPressure: return std::pow(s, law.gamma);
    case LawKind::LinearGT: return s;
    case LawKind::ViscoStress: return s + s * s * s;
  }
  return 0.0;
}

inline double pressure_derivative(const ConstitutiveLaw& law, double s) {
  detail::require_positive(law, s, "pressure_derivative");
  switch (law.kind) {
    case LawKind::PSystemPressure: return -law.gamma * std::pow(s, -law.gamma - 1.0);
    case LawKind::EulerPressure: return law.gamma * std::pow(s, law.gamma - 1.0);
    case LawKind::LinearGT: return 1.0;
    case LawKind::ViscoStress: return 1.0 + 3.0 * s * s;
  }
  return 0.0;
}

inline double pressure_second_derivative(const ConstitutiveLaw& law, double s) {
  detail::require_positive(law, s, "pressure_second_derivative");
  switch (law.kind) {
    case LawKind::PSystemPressure:
      return law.gamma * (law.gamma + 1.0) * std::pow(s, -law.gamma - 2.0);
    case LawKind::EulerPressure:
      return law.gamma * (law.gamma - 1.0) * std::pow(s, law.gamma - 2.0);
    case LawKind::LinearGT: return 0.0;
    case LawKind::ViscoStress: return 6.0 * s;
  }
  return 0.0;
}

/// P(s) = int_{tau_star}^{s} p(r) dr in closed form.
inline double internal_energy_P(const ConstitutiveLaw& law, double s) {
  detail::require_positive(law, s, "internal_energy_P");
  const double a = law.tau_star;
  switch (law.kind) {
    case LawKind::PSystemPressure:
      return detail::power_primitive(s, -law.gamma) - detail::power_primitive(a, -law.gamma);
    case LawKind::EulerPressure:
      return detail::power_primitive(s, law.gamma) - detail::power_primitive(a, law.gamma);
    case LawKind::LinearGT: return 0.5 * (s * s - a * a);
    case LawKind::ViscoStress:
      return 0.5 * (s * s - a * a) + 0.25 * (s * s * s * s - a * a * a * a);
  }
  return 0.0;
}

/**
 * Explicit constants of the quadratic sandwich
 *   |p(s|sb)| <= c_prime (s - sb)^2 <= -c * P(s|sb)
 * for the decreasing power law on [lo, hi]: c_prime = max|p''|/2 and
 * c = c_prime / (min|p'| / 2). Both extrema sit at the interval ends.
 */
struct SandwichConstants {
  double c_prime;
  double c;
};

inline SandwichConstants sandwich_constants(const ConstitutiveLaw& law, double lo, double hi) {
  if (law.kind != LawKind::PSystemPressure) {
    throw std::invalid_argument("sandwich_constants: only defined for the p-system power law");
  }
  if (!(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("sandwich_constants: need 0 < lo < hi");
  const double max_p2 = pressure_second_derivative(law, lo);
  const double min_p1 = std::abs(pressure_derivative(law, hi));
  const double c_prime = 0.5 * max_p2;
  return {c_prime, c_prime / (0.5 * min_p1)};
}

}  // namespace aprelax
