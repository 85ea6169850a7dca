#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "aprelax/constitutive_law.hpp"
#include "aprelax/grid.hpp"
#include "aprelax/models.hpp"
#include "aprelax/scheme.hpp"

namespace aprelax {

/// P(tau|taub) = P(tau) - P(taub) - p(taub)(tau - taub); <= 0 for decreasing p.
inline double relative_P(const ConstitutiveLaw& law, double tau, double tau_bar) {
  return internal_energy_P(law, tau) - internal_energy_P(law, tau_bar) -
         pressure(law, tau_bar) * (tau - tau_bar);
}

/// p(tau|taub) = p(tau) - p(taub) - p'(taub)(tau - taub).
inline double relative_p(const ConstitutiveLaw& law, double tau, double tau_bar) {
  return pressure(law, tau) - pressure(law, tau_bar) -
         pressure_derivative(law, tau_bar) * (tau - tau_bar);
}

/// Per-cell relative entropy eta(w_i | wbar_i).
template <RelaxationModel M>
double eta_cell(const M& model, const typename M::StateT& w, const typename M::StateT& w_bar,
                double eps) {
  return model.relative_entropy(w, w_bar, eps);
}

/// phi = sum_i dx eta_i, summed left to right.
template <RelaxationModel M>
double phi_total(const M& model, const Field<M::dim>& field, const Field<M::dim>& field_bar,
                 double eps, double dx) {
  if (field.size() != field_bar.size()) throw std::invalid_argument("phi_total: size mismatch");
  double phi = 0.0;
  for (std::size_t i = 0; i < field.size(); ++i)
    phi += dx * model.relative_entropy(field[i], field_bar[i], eps);
  return phi;
}

/**
 * Discrete relative-entropy flux on the interface between cells i and i+1,
 *   psi = 1/2 (u_i - ub_i)(p(tau_{i+1}) - p(taub_{i+1}))
 *       + 1/2 (u_{i+1} - ub_{i+1})(p(tau_i) - p(taub_i)).
 * Neighbour indices follow the boundary mode, so i = -1 and i = N-1 are the
 * boundary interfaces.
 */
inline double psi_interface(const ConstitutiveLaw& law, const Field<2>& field,
                            const Field<2>& field_bar, std::ptrdiff_t i,
                            BoundaryMode bc = BoundaryMode::ZeroFlux) {
  const std::size_t n = field.size();
  if (field_bar.size() != n) throw std::invalid_argument("psi_interface: size mismatch");
  if (i < -1 || i >= static_cast<std::ptrdiff_t>(n))
    throw std::out_of_range("psi_interface: interface index out of range");
  const auto l = neighbor_index(i, n, bc);
  const auto r = neighbor_index(i + 1, n, bc);
  const double dpl = pressure(law, field[l][0]) - pressure(law, field_bar[l][0]);
  const double dpr = pressure(law, field[r][0]) - pressure(law, field_bar[r][0]);
  return 0.5 * (field[l][1] - field_bar[l][1]) * dpr + 0.5 * (field[r][1] - field_bar[r][1]) * dpl;
}

struct Residuals {
  std::vector<double> Ru;
  std::vector<double> Rtau;
};

/**
 * Numerical-viscosity residuals of the entropy balance:
 *   Ru_i   = lambda eps^2 / 2dx (u_i - ub_i)(u_{i+1} - 2u_i + u_{i-1})
 *   Rtau_i = -lambda / 2dx [ (p(tau_i) - p(taub_i))(tau_{i+1} - 2tau_i + tau_{i-1})
 *                            - (tau_i - taub_i) p'(taub_i)(taub_{i+1} - 2taub_i + taub_{i-1}) ]
 */
inline Residuals residuals(const ConstitutiveLaw& law, const Field<2>& field,
                           const Field<2>& field_bar, double eps, double lambda, double dx,
                           BoundaryMode bc = BoundaryMode::ZeroFlux) {
  const std::size_t n = field.size();
  if (field_bar.size() != n) throw std::invalid_argument("residuals: size mismatch");
  const auto tau = field.component(0);
  const auto u = field.component(1);
  const auto tau_bar = field_bar.component(0);
  Residuals out{std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const auto si = static_cast<std::ptrdiff_t>(i);
    const double d2u = at(u, si + 1, bc) - 2.0 * u[i] + at(u, si - 1, bc);
    const double d2tau = at(tau, si + 1, bc) - 2.0 * tau[i] + at(tau, si - 1, bc);
    const double d2tau_bar = at(tau_bar, si + 1, bc) - 2.0 * tau_bar[i] + at(tau_bar, si - 1, bc);
    out.Ru[i] = lambda * eps * eps / (2.0 * dx) * (u[i] - field_bar[i][1]) * d2u;
    out.Rtau[i] = -lambda / (2.0 * dx) *
                  ((pressure(law, tau[i]) - pressure(law, tau_bar[i])) * d2tau -
                   (tau[i] - tau_bar[i]) * pressure_derivative(law, tau_bar[i]) * d2tau_bar);
  }
  return out;
}

/// Options for entropy_balance_residual; psi_sign = -1 is a mutation hook.
struct BalanceOptions {
  double psi_sign = 1.0;
};

struct BalanceReport {
  std::size_t first = 0;  ///< first cell where the identity is evaluated
  std::size_t last = 0;   ///< one past the last evaluated cell
  std::vector<double> defect;  ///< LHS - RHS per evaluated cell
  std::vector<double> scale;   ///< largest individual term magnitude per cell

  /// max_i |defect_i| / scale_i, zero-scale cells count as 0 / 0 = 0.
  [[nodiscard]] double max_relative_defect() const {
    double worst = 0.0;
    for (std::size_t k = 0; k < defect.size(); ++k) {
      if (scale[k] > 0.0) worst = std::max(worst, std::abs(defect[k]) / scale[k]);
      else if (defect[k] != 0.0) return INFINITY;
    }
    return worst;
  }
};

/**
 * Evaluates the semi-discrete evolution law of eta_i,
 *
 *   d eta_i/dt + (psi_{i+1/2} - psi_{i-1/2}) / dx
 *     = -sigma (u_i - ub_i)^2
 *       + 1/sigma (p(taub_{i+2}) - 2p(taub_i) + p(taub_{i-2})) / (2dx)^2 p(tau_i|taub_i)
 *       + eps^2/sigma (u_i - ub_i) d/dt[(p(taub_{i+1}) - p(taub_{i-1})) / 2dx]
 *       + Ru_i + Rtau_i,
 *
 * and returns LHS - RHS. ub and both time derivatives come from the
 * semi-discrete right-hand sides; d eta/dt uses the chain rule, so the
 * defect is pure rounding. field_bar supplies taub; its second component
 * is ignored and rebuilt from the limit relation.
 *
 * Periodic grids are checked at every cell. With ZeroFlux ghosts the limit
 * relation only holds for ub_{i+-1} when 1 <= i <= N-2.
 */
inline BalanceReport entropy_balance_residual(const PSystem& model, const Field<2>& field,
                                              const Field<2>& field_bar, double eps, double sigma,
                                              double lambda, const Grid1D& grid,
                                              BoundaryMode bc = BoundaryMode::Periodic,
                                              BalanceOptions options = {}) {
  const std::size_t n = field.size();
  if (n < 5) throw std::invalid_argument("entropy_balance_residual: need at least 5 cells");
  if (field_bar.size() != n || grid.size() != n)
    throw std::invalid_argument("entropy_balance_residual: size mismatch");
  if (!(eps > 0.0)) throw std::invalid_argument("entropy_balance_residual: eps must be > 0");
  const auto& law = model.law;
  const double dx = grid.dx();
  const double e2 = eps * eps;

  const auto bar = limit_relation(model, field_bar, grid, sigma, bc);
  const auto rhs = semidiscrete_rhs_hyperbolic(model, field, grid, eps, sigma, lambda, bc);
  const auto rhs_bar = semidiscrete_rhs_parabolic(model, bar, grid, sigma, lambda, bc);
  const auto res = residuals(law, field, bar, eps, lambda, dx, bc);

  std::vector<double> p_bar(n);
  std::vector<double> dp_bar_dt(n);
  for (std::size_t i = 0; i < n; ++i) {
    p_bar[i] = pressure(law, bar[i][0]);
    dp_bar_dt[i] = pressure_derivative(law, bar[i][0]) * rhs_bar[i][0];
  }

  BalanceReport report;
  report.first = bc == BoundaryMode::Periodic ? 0 : 1;
  report.last = bc == BoundaryMode::Periodic ? n : n - 1;
  for (std::size_t i = report.first; i < report.last; ++i) {
    const auto si = static_cast<std::ptrdiff_t>(i);
    const double tau = field[i][0];
    const double tau_bar = bar[i][0];
    const double du = field[i][1] - bar[i][1];

    // d eta/dt = eps^2 du (u' - ub') - (p(tau) - p(taub)) tau' + (tau - taub) p'(taub) taub'
    const double kinetic = e2 * du * rhs[i][1];
    const double kinetic_bar = -e2 * du * rhs_bar[i][1];
    const double potential = -(pressure(law, tau) - p_bar[i]) * rhs[i][0];
    const double potential_bar = (tau - tau_bar) * pressure_derivative(law, tau_bar) * rhs_bar[i][0];
    const double deta_dt = kinetic + kinetic_bar + potential + potential_bar;

    const double flux_div = options.psi_sign *
                            (psi_interface(law, field, bar, si, bc) -
                             psi_interface(law, field, bar, si - 1, bc)) / dx;
    const double friction = -sigma * du * du;
    const double wide_d2p = (at(p_bar, si + 2, bc) - 2.0 * p_bar[i] + at(p_bar, si - 2, bc)) /
                            ((2.0 * dx) * (2.0 * dx));
    const double curvature = wide_d2p * relative_p(law, tau, tau_bar) / sigma;
    const double unsteady =
        e2 / sigma * du * (at(dp_bar_dt, si + 1, bc) - at(dp_bar_dt, si - 1, bc)) / (2.0 * dx);

    const double lhs = deta_dt + flux_div;
    const double rhs_total = friction + curvature + unsteady + res.Ru[i] + res.Rtau[i];
    report.defect.push_back(lhs - rhs_total);
    report.scale.push_back(std::max({std::abs(kinetic), std::abs(kinetic_bar),
                                     std::abs(potential), std::abs(potential_bar),
                                     std::abs(deta_dt), std::abs(flux_div), std::abs(friction),
                                     std::abs(curvature), std::abs(unsteady), std::abs(res.Ru[i]),
                                     std::abs(res.Rtau[i])}));
  }
  return report;
}

/// Snapshot of the relative-entropy quantities between two p-system fields.
struct RelativeEntropyReport {
  std::vector<double> eta;
  double phi = 0.0;
  std::vector<double> psi_half;  ///< psi on interfaces -1/2 .. N-1/2 (N+1 values)
  std::vector<double> Ru;
  std::vector<double> Rtau;
};

inline RelativeEntropyReport relative_entropy_report(const PSystem& model, const Field<2>& field,
                                                     const Field<2>& field_bar, double eps,
                                                     double lambda, double dx,
                                                     BoundaryMode bc = BoundaryMode::ZeroFlux) {
  RelativeEntropyReport report;
  const std::size_t n = field.size();
  report.eta.resize(n);
  for (std::size_t i = 0; i < n; ++i) report.eta[i] = eta_cell(model, field[i], field_bar[i], eps);
  report.phi = phi_total(model, field, field_bar, eps, dx);
  for (std::ptrdiff_t i = -1; i < static_cast<std::ptrdiff_t>(n); ++i)
    report.psi_half.push_back(psi_interface(model.law, field, field_bar, i, bc));
  auto res = residuals(model.law, field, field_bar, eps, lambda, dx, bc);
  report.Ru = std::move(res.Ru);
  report.Rtau = std::move(res.Rtau);
  return report;
}

/// Both sides of the Ru bound at one time instant.
struct BoundCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  [[nodiscard]] double slack() const { return rhs - lhs; }
  [[nodiscard]] bool holds() const { return lhs <= rhs; }
};

namespace detail {

// Zero-extended value of a finitely supported sequence.
inline double zext(std::span<const double> v, std::ptrdiff_t i) {
  if (i < 0 || i >= static_cast<std::ptrdiff_t>(v.size())) return 0.0;
  return v[static_cast<std::size_t>(i)];
}

}  // namespace detail

/**
 * Pointwise-in-time form of the Ru estimate for finitely supported states
 * (both fields extended by zero outside the array):
 *
 *   sum_i dx Ru_i <= lambda theta / 2 sum_i dx (u_i - ub_i)^2
 *                    + eps^4 lambda dx / (2 theta) sum_i dx |D_xx ub_i|^2.
 *
 * The D_xx ub sum runs over every index where the zero extension gives a
 * nonzero second difference.
 */
inline BoundCheck ru_bound_snapshot(std::span<const double> u, std::span<const double> u_bar,
                                   double eps, double lambda, double theta, double dx) {
  if (u.size() != u_bar.size()) throw std::invalid_argument("ru_bound_snapshot: size mismatch");
  if (!(theta > 0.0)) throw std::invalid_argument("ru_bound_snapshot: theta must be > 0");
  const auto n = static_cast<std::ptrdiff_t>(u.size());
  BoundCheck check;
  double gap2 = 0.0;
  double dxx2 = 0.0;
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double gap = u[i] - u_bar[i];
    const double d2u = detail::zext(u, i + 1) - 2.0 * u[i] + detail::zext(u, i - 1);
    check.lhs += dx * (lambda * eps * eps / (2.0 * dx)) * gap * d2u;
    gap2 += dx * gap * gap;
  }
  for (std::ptrdiff_t i = -1; i <= n; ++i) {
    const double d2 =
        (detail::zext(u_bar, i + 1) - 2.0 * detail::zext(u_bar, i) + detail::zext(u_bar, i - 1)) /
        (dx * dx);
    dxx2 += dx * d2 * d2;
  }
  const double e4 = eps * eps * eps * eps;
  check.rhs = 0.5 * lambda * theta * gap2 + e4 * lambda * dx / (2.0 * theta) * dxx2;
  return check;
}

/**
 * Time-integrated version over a sampled pair of trajectories. Integrals use
 * left-endpoint weights t_{n+1} - t_n, so the last sample only closes the
 * final interval.
 */
inline BoundCheck ru_bound_integrated(std::span<const double> times,
                                      std::span<const std::vector<double>> u,
                                      std::span<const std::vector<double>> u_bar, double eps,
                                      double lambda, double theta, double dx) {
  if (times.size() != u.size() || u.size() != u_bar.size())
    throw std::invalid_argument("ru_bound_integrated: trajectory sizes differ");
  BoundCheck total;
  for (std::size_t k = 0; k + 1 < times.size(); ++k) {
    const double w = times[k + 1] - times[k];
    const auto snap = ru_bound_snapshot(u[k], u_bar[k], eps, lambda, theta, dx);
    total.lhs += w * snap.lhs;
    total.rhs += w * snap.rhs;
  }
  return total;
}

}  // namespace aprelax
