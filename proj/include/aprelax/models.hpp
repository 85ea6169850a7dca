#pragma once

#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "aprelax/constitutive_law.hpp"
#include "aprelax/grid.hpp"

namespace aprelax {

/// Raised by the admissibility guard when a density-like component leaves
/// (admissible_min, admissible_max) or any component stops being finite.
class admissibility_error : public domain_error {
 public:
  using domain_error::domain_error;
};

inline constexpr double admissible_min = 1e-6;
inline constexpr double admissible_max = 1e6;

namespace detail {

inline void guard_range(double value, std::size_t cell, std::string_view what) {
  if (!(value > admissible_min && value < admissible_max)) {
    std::ostringstream msg;
    msg << what << " = " << value << " at cell " << cell << " left the admissible range ("
        << admissible_min << ", " << admissible_max << ")";
    throw admissibility_error(msg.str());
  }
}

template <std::size_t Dim>
void guard_finite(const State<Dim>& w, std::size_t cell) {
  for (std::size_t k = 0; k < Dim; ++k) {
    if (!std::isfinite(w[k])) {
      std::ostringstream msg;
      msg << "non-finite component " << k << " at cell " << cell;
      throw admissibility_error(msg.str());
    }
  }
}

}  // namespace detail

// Every model is written in the reformulated split form
//
//   d_t w + d_x F(w) = -(sigma w_r + (1 - eps^2) d_x g(w)) / eps^2 e_r
//
// where r = relaxed and g = drive(). The limit relation is
// w_r = -D[g] / sigma with D the centred difference.

/// Lagrangian p-system with friction, state (tau, u).
struct PSystem {
  static constexpr std::size_t dim = 2;
  static constexpr std::size_t relaxed = 1;
  static constexpr std::string_view name = "psystem";
  static constexpr std::array<std::string_view, dim> components = {"tau", "u"};
  using StateT = State<dim>;

  ConstitutiveLaw law = ConstitutiveLaw::psystem();

  [[nodiscard]] StateT flux(const StateT& w) const { return {-w[1], pressure(law, w[0])}; }
  [[nodiscard]] double wave_speed(const StateT& w) const {
    return std::sqrt(-pressure_derivative(law, w[0]));
  }
  [[nodiscard]] double drive(const StateT& w) const { return pressure(law, w[0]); }
  [[nodiscard]] StateT drive_gradient(const StateT& w) const {
    return {pressure_derivative(law, w[0]), 0.0};
  }
  [[nodiscard]] double diffusivity(const StateT& w, double sigma) const {
    return std::abs(pressure_derivative(law, w[0])) / sigma;
  }
  void check_admissible(const StateT& w, std::size_t cell) const {
    detail::guard_finite(w, cell);
    detail::guard_range(w[0], cell, "tau");
  }
  /// eps^2/2 (u - ub)^2 - P(tau | taub)
  [[nodiscard]] double relative_entropy(const StateT& w, const StateT& wb, double eps) const {
    const double du = w[1] - wb[1];
    const double rel_P = internal_energy_P(law, w[0]) - internal_energy_P(law, wb[0]) -
                         pressure(law, wb[0]) * (w[0] - wb[0]);
    return 0.5 * eps * eps * du * du - rel_P;
  }
};

/// Goldstein-Taylor two-velocity model, state (rho, j).
struct GoldsteinTaylor {
  static constexpr std::size_t dim = 2;
  static constexpr std::size_t relaxed = 1;
  static constexpr std::string_view name = "gt";
  static constexpr std::array<std::string_view, dim> components = {"rho", "j"};
  using StateT = State<dim>;

  ConstitutiveLaw law = ConstitutiveLaw::linear();

  [[nodiscard]] StateT flux(const StateT& w) const { return {w[1], w[0]}; }
  [[nodiscard]] double wave_speed(const StateT&) const { return 1.0; }
  [[nodiscard]] double drive(const StateT& w) const { return w[0]; }
  [[nodiscard]] StateT drive_gradient(const StateT&) const { return {1.0, 0.0}; }
  [[nodiscard]] double diffusivity(const StateT&, double sigma) const { return 1.0 / sigma; }
  /// Linear law with no singular pressure: only finiteness is required.
  void check_admissible(const StateT& w, std::size_t cell) const { detail::guard_finite(w, cell); }
  /// Quadratic entropy eps^2 j^2/2 + rho^2/2 of the linear system.
  [[nodiscard]] double relative_entropy(const StateT& w, const StateT& wb, double eps) const {
    const double dr = w[0] - wb[0];
    const double dj = w[1] - wb[1];
    return 0.5 * eps * eps * dj * dj + 0.5 * dr * dr;
  }
};

/// Isentropic Euler with friction, state (rho, rho u), p(rho) = rho^gamma.
struct IsentropicEuler {
  static constexpr std::size_t dim = 2;
  static constexpr std::size_t relaxed = 1;
  static constexpr std::string_view name = "euler";
  static constexpr std::array<std::string_view, dim> components = {"rho", "m"};
  using StateT = State<dim>;

  ConstitutiveLaw law = ConstitutiveLaw::euler();

  [[nodiscard]] StateT flux(const StateT& w) const {
    return {w[1], w[1] * w[1] / w[0] + pressure(law, w[0])};
  }
  [[nodiscard]] double wave_speed(const StateT& w) const {
    return std::abs(w[1] / w[0]) + std::sqrt(pressure_derivative(law, w[0]));
  }
  [[nodiscard]] double drive(const StateT& w) const { return pressure(law, w[0]); }
  [[nodiscard]] StateT drive_gradient(const StateT& w) const {
    return {pressure_derivative(law, w[0]), 0.0};
  }
  [[nodiscard]] double diffusivity(const StateT& w, double sigma) const {
    return pressure_derivative(law, w[0]) / sigma;
  }
  void check_admissible(const StateT& w, std::size_t cell) const {
    detail::guard_finite(w, cell);
    detail::guard_range(w[0], cell, "rho");
  }
  /// h(rho) = rho^gamma / (gamma - 1), so h'' = p'(rho) / rho.
  [[nodiscard]] double enthalpy_like(double rho) const {
    return std::pow(rho, law.gamma) / (law.gamma - 1.0);
  }
  /// eps^2 rho (u - ub)^2 / 2 + h(rho | rhob)
  [[nodiscard]] double relative_entropy(const StateT& w, const StateT& wb, double eps) const {
    const double du = w[1] / w[0] - wb[1] / wb[0];
    const double dh_bar = law.gamma / (law.gamma - 1.0) * std::pow(wb[0], law.gamma - 1.0);
    const double rel_h = enthalpy_like(w[0]) - enthalpy_like(wb[0]) - dh_bar * (w[0] - wb[0]);
    return 0.5 * eps * eps * w[0] * du * du + rel_h;
  }
};

/// Visco-elastic system with memory, state (u, v, z), stress gamma(u) = u + u^3.
struct ViscoElastic {
  static constexpr std::size_t dim = 3;
  static constexpr std::size_t relaxed = 2;
  static constexpr std::string_view name = "visco";
  static constexpr std::array<std::string_view, dim> components = {"u", "v", "z"};
  using StateT = State<dim>;

  ConstitutiveLaw law = ConstitutiveLaw::visco();
  double mu = 1.0;

  [[nodiscard]] StateT flux(const StateT& w) const {
    return {-w[1], -pressure(law, w[0]) - w[2], -mu * w[1]};
  }
  [[nodiscard]] double wave_speed(const StateT& w) const {
    return std::sqrt(pressure_derivative(law, w[0]) + mu);
  }
  [[nodiscard]] double drive(const StateT& w) const { return -mu * w[1]; }
  [[nodiscard]] StateT drive_gradient(const StateT&) const { return {0.0, -mu, 0.0}; }
  [[nodiscard]] double diffusivity(const StateT&, double sigma) const { return mu / sigma; }
  void check_admissible(const StateT& w, std::size_t cell) const { detail::guard_finite(w, cell); }
  /// (v - vb)^2/2 + Gamma(u | ub) + eps^2 (z - zb)^2 / (2 mu), Gamma' = gamma.
  [[nodiscard]] double relative_entropy(const StateT& w, const StateT& wb, double eps) const {
    const double dv = w[1] - wb[1];
    const double dz = w[2] - wb[2];
    const double rel_gamma = internal_energy_P(law, w[0]) - internal_energy_P(law, wb[0]) -
                             pressure(law, wb[0]) * (w[0] - wb[0]);
    return 0.5 * dv * dv + rel_gamma + 0.5 * eps * eps * dz * dz / mu;
  }
};

using ModelSpec = std::variant<PSystem, GoldsteinTaylor, IsentropicEuler, ViscoElastic>;

enum class ModelName { PSystem, GoldsteinTaylor, IsentropicEuler, ViscoElastic };

struct ModelParams {
  double gamma = 1.4;
  double mu = 1.0;
  double tau_star = 1.0;
};

inline ModelSpec make_model(ModelName name, const ModelParams& params = {}) {
  switch (name) {
    case ModelName::PSystem:
      return PSystem{ConstitutiveLaw::psystem(params.gamma, params.tau_star)};
    case ModelName::GoldsteinTaylor: return GoldsteinTaylor{};
    case ModelName::IsentropicEuler:
      return IsentropicEuler{ConstitutiveLaw::euler(params.gamma, params.tau_star)};
    case ModelName::ViscoElastic: return ViscoElastic{ConstitutiveLaw::visco(), params.mu};
  }
  return PSystem{};
}

inline std::string_view model_name(const ModelSpec& model) {
  return std::visit([](const auto& m) { return m.name; }, model);
}

inline std::size_t state_dim(const ModelSpec& model) {
  return std::visit([](const auto& m) { return std::decay_t<decltype(m)>::dim; }, model);
}

template <class M>
concept RelaxationModel = requires(const M& m, const typename M::StateT& w, double s) {
  { M::dim } -> std::convertible_to<std::size_t>;
  { M::relaxed } -> std::convertible_to<std::size_t>;
  { m.flux(w) } -> std::same_as<typename M::StateT>;
  { m.wave_speed(w) } -> std::convertible_to<double>;
  { m.drive(w) } -> std::convertible_to<double>;
  { m.diffusivity(w, s) } -> std::convertible_to<double>;
  { m.relative_entropy(w, w, s) } -> std::convertible_to<double>;
};

static_assert(RelaxationModel<PSystem>);
static_assert(RelaxationModel<GoldsteinTaylor>);
static_assert(RelaxationModel<IsentropicEuler>);
static_assert(RelaxationModel<ViscoElastic>);

/// (g(w_{i+1}) - g(w_{i-1})) / (2 dx) for the model's drive g.
template <RelaxationModel M>
std::vector<double> centered_drive_difference(const M& model, const Field<M::dim>& field,
                                              double dx, BoundaryMode bc) {
  const std::size_t n = field.size();
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = model.drive(field[i]);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto si = static_cast<std::ptrdiff_t>(i);
    out[i] = (at(g, si + 1, bc) - at(g, si - 1, bc)) / (2.0 * dx);
  }
  return out;
}

/**
 * Fills the algebraic (relaxed) component of a limit-model field from
 * sigma w_r = -D[g]:  u = -(p(tau_{i+1}) - p(tau_{i-1})) / (2 sigma dx) for
 * the p-system, and the analogous relation for the other models.
 */
template <RelaxationModel M>
Field<M::dim> limit_relation(const M& model, Field<M::dim> field_bar, const Grid1D& grid,
                             double sigma, BoundaryMode bc = BoundaryMode::ZeroFlux) {
  const std::size_t n = field_bar.size();
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = model.drive(field_bar[i]);
  for (std::size_t i = 0; i < n; ++i) {
    const auto si = static_cast<std::ptrdiff_t>(i);
    field_bar[i][M::relaxed] = -(at(g, si + 1, bc) - at(g, si - 1, bc)) / (2.0 * sigma * grid.dx());
  }
  return field_bar;
}

}  // namespace aprelax
