#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "aprelax/grid.hpp"
#include "aprelax/models.hpp"

namespace aprelax {

/// The explicit convection step was asked to run with dt * lambda / dx > 1/2.
class cfl_violation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A time loop stopped early; carries the index of the failing step.
class solver_abort : public std::runtime_error {
 public:
  solver_abort(const std::string& what, std::size_t step) : std::runtime_error(what), step_(step) {}
  [[nodiscard]] std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

inline constexpr double max_courant = 0.5;

struct SchemeParams {
  double eps = 1e-2;
  double sigma = 1.0;
  double cfl = 0.5;
  BoundaryMode boundary = BoundaryMode::ZeroFlux;
  double t_final = 1e-2;
  /// Cap dt <= diffusion_number * dx^2 / kappa_max, kappa being the
  /// diffusivity of the limit equation. Zero disables the cap.
  double diffusion_number = 0.5;

  void validate() const {
    if (!(eps >= 0.0)) throw std::invalid_argument("eps: must be >= 0");
    if (!(sigma > 0.0)) throw std::invalid_argument("sigma: must be > 0");
    if (!(cfl > 0.0 && cfl <= max_courant))
      throw std::invalid_argument("cfl: must lie in (0, 1/2]");
    if (!(t_final >= 0.0)) throw std::invalid_argument("t_final: must be >= 0");
    if (!(diffusion_number >= 0.0))
      throw std::invalid_argument("diffusion_number: must be >= 0");
  }
};

/// lambda = max_i of the model's local wave-speed bound.
template <RelaxationModel M>
double compute_lambda(const M& model, const Field<M::dim>& field) {
  double lambda = 0.0;
  for (std::size_t i = 0; i < field.size(); ++i) {
    model.check_admissible(field[i], i);
    lambda = std::max(lambda, model.wave_speed(field[i]));
  }
  return lambda;
}

/// Largest diffusivity of the limit (parabolic) equation over the field.
template <RelaxationModel M>
double max_diffusivity(const M& model, const Field<M::dim>& field, double sigma) {
  double kappa = 0.0;
  for (std::size_t i = 0; i < field.size(); ++i)
    kappa = std::max(kappa, model.diffusivity(field[i], sigma));
  return kappa;
}

/// HLL flux with a single global speed: central average plus lambda diffusion.
template <RelaxationModel M>
typename M::StateT interface_flux(const M& model, const typename M::StateT& left,
                                  const typename M::StateT& right, double lambda) {
  const auto fl = model.flux(left);
  const auto fr = model.flux(right);
  typename M::StateT out{};
  for (std::size_t k = 0; k < M::dim; ++k)
    out[k] = 0.5 * (fl[k] + fr[k]) - 0.5 * lambda * (right[k] - left[k]);
  return out;
}

namespace detail {

// fluxes[k] sits on the interface between cells k-1 and k, k = 0..N.
template <RelaxationModel M>
std::vector<typename M::StateT> interface_fluxes(const M& model, const Field<M::dim>& field,
                                                 double lambda, BoundaryMode bc) {
  const std::size_t n = field.size();
  std::vector<typename M::StateT> fluxes(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const auto sk = static_cast<std::ptrdiff_t>(k);
    fluxes[k] = interface_flux(model, field[neighbor_index(sk - 1, n, bc)],
                               field[neighbor_index(sk, n, bc)], lambda);
  }
  return fluxes;
}

}  // namespace detail

/**
 * Explicit HLL update of the non-stiff convective part,
 *   w_i <- w_i - dt/dx (F_{i+1/2} - F_{i-1/2}).
 * Throws cfl_violation when dt * lambda / dx exceeds 1/2.
 */
template <RelaxationModel M>
Field<M::dim> convection_step(const M& model, const Field<M::dim>& field, const Grid1D& grid,
                              double dt, double lambda, BoundaryMode bc) {
  const double dx = grid.dx();
  if (!(dt * lambda / dx <= max_courant)) {
    std::ostringstream msg;
    msg << "CFL violation: dt = " << dt << ", lambda = " << lambda << ", dx = " << dx
        << " give dt*lambda/dx = " << dt * lambda / dx << " > 0.5";
    throw cfl_violation(msg.str());
  }
  const auto fluxes = detail::interface_fluxes(model, field, lambda, bc);
  const double ratio = dt / dx;
  Field<M::dim> out(field.size());
  for (std::size_t i = 0; i < field.size(); ++i)
    for (std::size_t k = 0; k < M::dim; ++k)
      out[i][k] = field[i][k] - ratio * (fluxes[i + 1][k] - fluxes[i][k]);
  return out;
}

/// Coefficients of the implicit relaxation update w_r <- decay w_r - gain D[g].
struct RelaxationCoefficients {
  double decay;  ///< eps^2 / (eps^2 + sigma dt)
  double gain;   ///< dt (1 - eps^2) / (sigma dt + eps^2)
};

inline RelaxationCoefficients relaxation_coefficients(double dt, double eps, double sigma) {
  const double e2 = eps * eps;
  return {e2 / (e2 + sigma * dt), dt * (1.0 - e2) / (dt * sigma + e2)};
}

/**
 * Backward-Euler solve of d_t w_r = -(sigma w_r + (1 - eps^2) D[g]) / eps^2
 * with the other components frozen. Since g does not depend on w_r the
 * implicit update is explicit in the post-convection state.
 */
template <RelaxationModel M>
Field<M::dim> relaxation_step(const M& model, Field<M::dim> field, const Grid1D& grid, double dt,
                              double eps, double sigma, BoundaryMode bc) {
  if (!(eps >= 0.0)) throw std::invalid_argument("relaxation_step: eps must be >= 0");
  if (!(dt > 0.0)) throw std::invalid_argument("relaxation_step: dt must be > 0");
  const auto [decay, gain] = relaxation_coefficients(dt, eps, sigma);
  const auto dg = centered_drive_difference(model, field, grid.dx(), bc);
  for (std::size_t i = 0; i < field.size(); ++i)
    field[i][M::relaxed] = decay * field[i][M::relaxed] - gain * dg[i];
  return field;
}

/// One step of the discrete parabolic limit: convection with the algebraic
/// component, then the algebraic component refreshed from the limit relation.
template <RelaxationModel M>
Field<M::dim> limit_step(const M& model, const Field<M::dim>& field_bar, const Grid1D& grid,
                         double dt, double lambda, double sigma, BoundaryMode bc) {
  auto out = convection_step(model, field_bar, grid, dt, lambda, bc);
  return limit_relation(model, std::move(out), grid, sigma, bc);
}

/// Full split step; eps == 0 takes the limit-scheme path.
template <RelaxationModel M>
Field<M::dim> advance(const M& model, const Field<M::dim>& field, const Grid1D& grid, double dt,
                      double lambda, double eps, double sigma, BoundaryMode bc) {
  if (eps == 0.0) return limit_step(model, field, grid, dt, lambda, sigma, bc);
  auto half = convection_step(model, field, grid, dt, lambda, bc);
  return relaxation_step(model, std::move(half), grid, dt, eps, sigma, bc);
}

/**
 * dt = min(cfl dx / lambda, diffusion_number dx^2 / kappa, remaining),
 * nudged down until dt * lambda / dx <= cfl holds in floating point.
 */
inline double stable_time_step(double lambda, double kappa, const Grid1D& grid,
                               const SchemeParams& params, double remaining) {
  const double dx = grid.dx();
  double dt = remaining;
  if (lambda > 0.0) {
    double hyperbolic = params.cfl * dx / lambda;
    while (hyperbolic * lambda / dx > params.cfl) hyperbolic = std::nextafter(hyperbolic, 0.0);
    dt = std::min(dt, hyperbolic);
  }
  if (params.diffusion_number > 0.0 && kappa > 0.0)
    dt = std::min(dt, params.diffusion_number * dx * dx / kappa);
  return dt;
}

template <std::size_t Dim>
struct RunResult {
  Field<Dim> final;
  std::size_t steps = 0;
  double lambda_initial = 0.0;
  double lambda_max = 0.0;
  double t = 0.0;
};

struct NoObserver {
  template <class F>
  void operator()(std::size_t, double, const F&) const {}
};

/**
 * Marches field0 to params.t_final with lambda recomputed every step. The
 * observer sees (step, t, field) at t = 0 and after every step. The last step
 * is clipped so the run ends exactly at t_final.
 */
template <RelaxationModel M, class Observer = NoObserver>
RunResult<M::dim> run(const M& model, const SchemeParams& params, const Grid1D& grid,
                      Field<M::dim> field0, Observer&& observer = {}) {
  params.validate();
  if (field0.size() != grid.size()) throw std::invalid_argument("run: field/grid size mismatch");
  RunResult<M::dim> result;
  result.final = std::move(field0);
  for (std::size_t i = 0; i < result.final.size(); ++i)
    model.check_admissible(result.final[i], i);
  observer(std::size_t{0}, 0.0, result.final);

  double t = 0.0;
  while (t < params.t_final) {
    const std::size_t step = result.steps;
    try {
      const double lambda = compute_lambda(model, result.final);
      if (step == 0) result.lambda_initial = lambda;
      result.lambda_max = std::max(result.lambda_max, lambda);
      const double kappa = max_diffusivity(model, result.final, params.sigma);
      const double remaining = params.t_final - t;
      const double dt = stable_time_step(lambda, kappa, grid, params, remaining);
      result.final = advance(model, result.final, grid, dt, lambda, params.eps, params.sigma,
                             params.boundary);
      for (std::size_t i = 0; i < result.final.size(); ++i)
        model.check_admissible(result.final[i], i);
      t = (dt == remaining) ? params.t_final : t + dt;
    } catch (const domain_error& e) {
      std::ostringstream msg;
      msg << "solver aborted at step " << step << ": " << e.what();
      throw solver_abort(msg.str(), step);
    }
    ++result.steps;
    observer(result.steps, t, result.final);
  }
  result.t = t;
  return result;
}

namespace detail {

template <RelaxationModel M>
Field<M::dim> convective_rhs(const M& model, const Field<M::dim>& field, double dx,
                             double lambda, BoundaryMode bc) {
  const auto fluxes = interface_fluxes(model, field, lambda, bc);
  Field<M::dim> rhs(field.size());
  for (std::size_t i = 0; i < field.size(); ++i)
    for (std::size_t k = 0; k < M::dim; ++k) rhs[i][k] = -(fluxes[i + 1][k] - fluxes[i][k]) / dx;
  return rhs;
}

}  // namespace detail

/**
 * Semi-discrete (method of lines) right-hand side of the scaled hyperbolic
 * system. For the p-system this is
 *   tau_i' = (u_{i+1} - u_{i-1}) / 2dx + lambda (tau_{i+1} - 2 tau_i + tau_{i-1}) / 2dx
 *   u_i'   = lambda (u_{i+1} - 2 u_i + u_{i-1}) / 2dx
 *            - (p(tau_{i+1}) - p(tau_{i-1})) / (2 eps^2 dx) - sigma u_i / eps^2
 */
template <RelaxationModel M>
Field<M::dim> semidiscrete_rhs_hyperbolic(const M& model, const Field<M::dim>& field,
                                          const Grid1D& grid, double eps, double sigma,
                                          double lambda, BoundaryMode bc) {
  if (!(eps > 0.0))
    throw std::invalid_argument("semidiscrete_rhs_hyperbolic: eps must be > 0 (use the parabolic rhs)");
  const double dx = grid.dx();
  auto rhs = detail::convective_rhs(model, field, dx, lambda, bc);
  const auto dg = centered_drive_difference(model, field, dx, bc);
  const double e2 = eps * eps;
  for (std::size_t i = 0; i < field.size(); ++i)
    rhs[i][M::relaxed] -= (sigma * field[i][M::relaxed] + (1.0 - e2) * dg[i]) / e2;
  return rhs;
}

/**
 * Semi-discrete right-hand side of the discrete limit system. The algebraic
 * component is refreshed from the limit relation first; its returned time
 * derivative follows from differentiating that relation along the flow.
 */
template <RelaxationModel M>
Field<M::dim> semidiscrete_rhs_parabolic(const M& model, const Field<M::dim>& field_bar,
                                         const Grid1D& grid, double sigma, double lambda,
                                         BoundaryMode bc) {
  const double dx = grid.dx();
  const auto refreshed = limit_relation(model, field_bar, grid, sigma, bc);
  auto rhs = detail::convective_rhs(model, refreshed, dx, lambda, bc);
  const std::size_t n = refreshed.size();
  std::vector<double> dg_dt(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto grad = model.drive_gradient(refreshed[i]);
    double acc = 0.0;
    for (std::size_t k = 0; k < M::dim; ++k)
      if (k != M::relaxed) acc += grad[k] * rhs[i][k];
    dg_dt[i] = acc;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto si = static_cast<std::ptrdiff_t>(i);
    rhs[i][M::relaxed] = -(at(dg_dt, si + 1, bc) - at(dg_dt, si - 1, bc)) / (2.0 * sigma * dx);
  }
  return rhs;
}

}  // namespace aprelax
