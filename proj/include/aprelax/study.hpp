#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "aprelax/entropy.hpp"
#include "aprelax/initial_data.hpp"
#include "aprelax/models.hpp"
#include "aprelax/norms.hpp"
#include "aprelax/scheme.hpp"

namespace aprelax {

struct StudyConfig {
  std::vector<ModelName> models = {ModelName::PSystem, ModelName::GoldsteinTaylor,
                                   ModelName::IsentropicEuler, ModelName::ViscoElastic};
  std::vector<InitialKind> ics = {InitialKind::Discontinuous, InitialKind::Smooth};
  std::vector<std::size_t> n_list = {100, 200, 400, 1600};
  std::vector<double> eps_list = {1e-1, 3e-2, 1e-2, 3e-3, 1e-3, 3e-4, 1e-4};
  double t_final = 1e-2;
  double sigma = 1.0;
  double gamma = 1.4;
  double mu = 1.0;
  double tau_star = 1.0;
  double cfl = 0.5;
  double domain_a = -4.0;
  double domain_b = 4.0;
  BoundaryMode boundary = BoundaryMode::ZeroFlux;
  double diffusion_number = 0.5;
  /// phi(T) values below this are floating-point floor and left out of rate fits.
  double phi_floor = 1e-28;

  void validate() const {
    if (models.empty()) throw std::invalid_argument("model: list is empty");
    if (ics.empty()) throw std::invalid_argument("ic: list is empty");
    if (n_list.empty()) throw std::invalid_argument("n: list is empty");
    for (auto n : n_list)
      if (n < 3) throw std::invalid_argument("n: every N must be >= 3 (grid minimum)");
    if (eps_list.empty()) throw std::invalid_argument("eps: list is empty");
    for (std::size_t k = 0; k < eps_list.size(); ++k) {
      if (!(eps_list[k] > 0.0)) throw std::invalid_argument("eps: every eps must be > 0");
      if (k > 0 && !(eps_list[k] < eps_list[k - 1]))
        throw std::invalid_argument("eps: list must be strictly decreasing");
    }
    if (!(domain_b > domain_a)) throw std::invalid_argument("domain_a/domain_b: need domain_a < domain_b");
    scheme(eps_list.front()).validate();
  }

  [[nodiscard]] SchemeParams scheme(double eps) const {
    return {eps, sigma, cfl, boundary, t_final, diffusion_number};
  }
  [[nodiscard]] ModelParams model_params() const { return {gamma, mu, tau_star}; }
  [[nodiscard]] Grid1D grid(std::size_t n) const { return Grid1D(domain_a, domain_b, n); }
};

/// Outcome of one hyperbolic/limit pair.
template <std::size_t Dim>
struct PairResult {
  double phi0 = 0.0;
  double phiT = 0.0;
  double l2_distance = 0.0;  ///< (sum_i dx |w_i - wb_i|^2)^(1/2) at T
  std::size_t steps = 0;
  double lambda_initial = 0.0;
  double lambda_max = 0.0;
  std::optional<RegularityDiagnostics> regularity;  ///< p-system limit trajectory only
  Field<Dim> hyperbolic;
  Field<Dim> limit;
};

inline std::string run_context(std::string_view model, std::size_t n, double eps) {
  std::ostringstream msg;
  msg << "model=" << model << " N=" << n << " eps=" << eps;
  return msg.str();
}

template <std::size_t Dim>
double l2_distance(const Field<Dim>& a, const Field<Dim>& b, double dx) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < Dim; ++k) acc += dx * (a[i][k] - b[i][k]) * (a[i][k] - b[i][k]);
  return std::sqrt(acc);
}

/**
 * Runs the split scheme at eps and the limit scheme from the same
 * well-prepared data on the same grid. Both fields advance with one shared
 * dt per step, built from lambda = max of the two fields' speed bounds, so
 * phi compares states at identical times. eps = 0 is accepted here and runs
 * the limit path twice.
 */
template <RelaxationModel M>
PairResult<M::dim> advance_pair(const M& model, InitialData ic, const Grid1D& grid,
                                const SchemeParams& params) {
  params.validate();
  PairResult<M::dim> out;
  auto field = initial_state(model, ic, grid, params.sigma, params.boundary);
  auto bar = field;
  out.phi0 = phi_total(model, field, bar, params.eps, grid.dx());

  std::optional<RegularityAccumulator> regularity;
  if constexpr (std::is_same_v<M, PSystem>) {
    regularity.emplace(model.law, grid.dx());
    regularity->add(0.0, bar.component(0), bar.component(1));
  }

  double t = 0.0;
  while (t < params.t_final) {
    const std::size_t step = out.steps;
    try {
      const double lambda = std::max(compute_lambda(model, field), compute_lambda(model, bar));
      if (step == 0) out.lambda_initial = lambda;
      out.lambda_max = std::max(out.lambda_max, lambda);
      const double kappa = std::max(max_diffusivity(model, field, params.sigma),
                                    max_diffusivity(model, bar, params.sigma));
      const double remaining = params.t_final - t;
      const double dt = stable_time_step(lambda, kappa, grid, params, remaining);
      field = advance(model, field, grid, dt, lambda, params.eps, params.sigma, params.boundary);
      bar = limit_step(model, bar, grid, dt, lambda, params.sigma, params.boundary);
      for (std::size_t i = 0; i < field.size(); ++i) {
        model.check_admissible(field[i], i);
        model.check_admissible(bar[i], i);
      }
      t = (dt == remaining) ? params.t_final : t + dt;
    } catch (const domain_error& e) {
      std::ostringstream msg;
      msg << run_context(M::name, grid.size(), params.eps) << " step=" << step << ": "
          << e.what();
      throw solver_abort(msg.str(), step);
    }
    ++out.steps;
    if (regularity) regularity->add(t, bar.component(0), bar.component(1));
  }
  out.phiT = phi_total(model, field, bar, params.eps, grid.dx());
  out.l2_distance = l2_distance(field, bar, grid.dx());
  if (regularity && regularity->samples() >= 2) out.regularity = regularity->result();
  out.hyperbolic = std::move(field);
  out.limit = std::move(bar);
  return out;
}

/// advance_pair restricted to eps > 0.
template <RelaxationModel M>
PairResult<M::dim> run_pair(const M& model, InitialData ic, const Grid1D& grid,
                            const SchemeParams& params) {
  if (!(params.eps > 0.0)) throw std::invalid_argument("run_pair: eps must be > 0");
  return advance_pair(model, ic, grid, params);
}

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;  ///< largest |log phi - fit| over the used points
  std::size_t used = 0;
  std::vector<double> excluded_eps;  ///< eps values whose phi was <= floor
};

/**
 * Least-squares slope of log(phi) against log(eps). Points with
 * phi <= floor are excluded and listed; fewer than 3 remaining is an error.
 */
inline RateFit fit_rate(const std::vector<std::pair<double, double>>& points, double floor = 0.0) {
  RateFit fit;
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& [eps, phi] : points) {
    if (phi > floor && phi > 0.0 && eps > 0.0) {
      xs.push_back(std::log(eps));
      ys.push_back(std::log(phi));
    } else {
      fit.excluded_eps.push_back(eps);
    }
  }
  if (xs.size() < 3) {
    std::ostringstream msg;
    msg << "fit_rate: need at least 3 positive points above the floor, got " << xs.size();
    throw std::invalid_argument(msg.str());
  }
  const auto m = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    mx += xs[k];
    my += ys[k];
  }
  mx /= m;
  my /= m;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxy += (xs[k] - mx) * (ys[k] - my);
    sxx += (xs[k] - mx) * (xs[k] - mx);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_rate: all eps values coincide");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (std::size_t k = 0; k < xs.size(); ++k)
    fit.max_residual =
        std::max(fit.max_residual, std::abs(ys[k] - (fit.intercept + fit.slope * xs[k])));
  fit.used = xs.size();
  return fit;
}

struct ApConsistency {
  std::vector<double> eps;
  std::vector<double> distance;
  bool strictly_decreasing = false;
  std::optional<RateFit> exponent;  ///< fit of distance vs eps over the positive entries
};

/// Distance at T between the split and limit runs for a decreasing eps list.
template <RelaxationModel M>
ApConsistency ap_consistency(const M& model, InitialData ic, const Grid1D& grid,
                             SchemeParams params, const std::vector<double>& eps_small) {
  for (std::size_t k = 1; k < eps_small.size(); ++k)
    if (!(eps_small[k] < eps_small[k - 1]))
      throw std::invalid_argument("ap_consistency: eps list must be strictly decreasing");
  ApConsistency out;
  std::vector<std::pair<double, double>> points;
  for (double eps : eps_small) {
    params.eps = eps;
    const auto pair = advance_pair(model, ic, grid, params);
    out.eps.push_back(eps);
    out.distance.push_back(pair.l2_distance);
    if (eps > 0.0) points.emplace_back(eps, pair.l2_distance);
  }
  out.strictly_decreasing = true;
  for (std::size_t k = 1; k < out.distance.size(); ++k)
    if (!(out.distance[k] < out.distance[k - 1])) out.strictly_decreasing = false;
  if (points.size() >= 3) out.exponent = fit_rate(points);
  return out;
}

/// One row of the sweep table.
struct StudyRow {
  std::string model;
  std::string ic;
  std::size_t n = 0;
  double eps = 0.0;
  double sigma = 0.0;
  double gamma = 0.0;
  double mu = 0.0;
  double t_final = 0.0;
  double cfl = 0.0;
  double phi0 = 0.0;
  double phiT = 0.0;
  std::size_t steps = 0;
  double lambda_initial = 0.0;
  double lambda_max = 0.0;
  std::optional<RegularityDiagnostics> regularity;
  bool ok = false;
  std::string error;

  [[nodiscard]] std::string rate_group() const {
    return model + "-" + ic + "-N" + std::to_string(n);
  }
};

struct GroupFit {
  std::string group;
  std::optional<RateFit> fit;
  std::string error;
};

struct StudyResult {
  std::vector<StudyRow> rows;
  std::vector<GroupFit> fits;

  [[nodiscard]] std::size_t failures() const {
    return static_cast<std::size_t>(
        std::count_if(rows.begin(), rows.end(), [](const StudyRow& r) { return !r.ok; }));
  }
};

/// One sweep item; never throws, failures are recorded on the row.
inline StudyRow run_study_item(const StudyConfig& config, ModelName name, InitialKind ic,
                               std::size_t n, double eps) {
  StudyRow row;
  const auto model = make_model(name, config.model_params());
  row.model = std::string(model_name(model));
  row.ic = std::string(to_string(ic));
  row.n = n;
  row.eps = eps;
  row.sigma = config.sigma;
  row.gamma = config.gamma;
  row.mu = config.mu;
  row.t_final = config.t_final;
  row.cfl = config.cfl;
  try {
    const auto grid = config.grid(n);
    std::visit(
        [&](const auto& m) {
          const auto pair = run_pair(m, InitialData{ic}, grid, config.scheme(eps));
          row.phi0 = pair.phi0;
          row.phiT = pair.phiT;
          row.steps = pair.steps;
          row.lambda_initial = pair.lambda_initial;
          row.lambda_max = pair.lambda_max;
          row.regularity = pair.regularity;
        },
        model);
    row.ok = true;
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

/// Fits every (model, ic, N) group of completed rows, in row order.
inline std::vector<GroupFit> fit_groups(const std::vector<StudyRow>& rows, double floor,
                                        double eps_min = 0.0, double eps_max = INFINITY) {
  std::vector<GroupFit> fits;
  std::vector<std::string> order;
  for (const auto& row : rows)
    if (std::find(order.begin(), order.end(), row.rate_group()) == order.end())
      order.push_back(row.rate_group());
  for (const auto& group : order) {
    std::vector<std::pair<double, double>> points;
    for (const auto& row : rows)
      if (row.ok && row.rate_group() == group && row.eps >= eps_min && row.eps <= eps_max)
        points.emplace_back(row.eps, row.phiT);
    GroupFit gf{group, std::nullopt, {}};
    try {
      gf.fit = fit_rate(points, floor);
    } catch (const std::exception& e) {
      gf.error = e.what();
    }
    fits.push_back(std::move(gf));
  }
  return fits;
}

/**
 * Full cross product of the configuration. Items run on up to `threads`
 * workers; rows land in configuration order regardless of completion order.
 */
inline StudyResult run_sweep(const StudyConfig& config, unsigned threads = 1) {
  config.validate();
  struct Item {
    ModelName model;
    InitialKind ic;
    std::size_t n;
    double eps;
  };
  std::vector<Item> items;
  for (auto m : config.models)
    for (auto ic : config.ics)
      for (auto n : config.n_list)
        for (auto eps : config.eps_list) items.push_back({m, ic, n, eps});

  StudyResult result;
  result.rows.resize(items.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next.fetch_add(1); k < items.size(); k = next.fetch_add(1))
      result.rows[k] = run_study_item(config, items[k].model, items[k].ic, items[k].n, items[k].eps);
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(items.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
  }
  result.fits = fit_groups(result.rows, config.phi_floor);
  return result;
}

}  // namespace aprelax
