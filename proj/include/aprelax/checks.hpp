#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "aprelax/entropy.hpp"
#include "aprelax/scheme.hpp"

namespace aprelax {

/// Result of one randomized property suite.
struct CheckOutcome {
  std::string name;
  std::size_t cases = 0;
  double worst = 0.0;      ///< largest normalized defect (or violation ratio) seen
  double tolerance = 0.0;  ///< pass iff worst <= tolerance
  std::string first_failure;

  [[nodiscard]] bool passed() const { return first_failure.empty() && worst <= tolerance; }
};

namespace detail {

struct PairSample {
  Grid1D grid;
  Field<2> field;
  Field<2> field_bar;
  double eps;
  double sigma;
};

inline PairSample random_psystem_pair(std::mt19937_64& rng, std::size_t min_cells,
                                      std::size_t max_cells) {
  std::uniform_int_distribution<std::size_t> cells(min_cells, max_cells);
  std::uniform_real_distribution<double> tau(0.5, 4.0);
  std::uniform_real_distribution<double> vel(-2.0, 2.0);
  std::uniform_real_distribution<double> log_eps(-3.0, 0.0);
  std::uniform_real_distribution<double> sig(0.5, 2.0);
  std::uniform_real_distribution<double> len(0.5, 8.0);
  const std::size_t n = cells(rng);
  PairSample s{Grid1D(0.0, len(rng), n), Field<2>(n), Field<2>(n), 0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    s.field[i] = {tau(rng), vel(rng)};
    s.field_bar[i] = {tau(rng), 0.0};
  }
  s.eps = std::pow(10.0, log_eps(rng));
  s.sigma = sig(rng);
  return s;
}

inline std::string describe(const PairSample& s, std::size_t case_index) {
  std::ostringstream os;
  os << "case " << case_index << " (N=" << s.grid.size() << ", dx=" << s.grid.dx()
     << ", eps=" << s.eps << ", sigma=" << s.sigma << ")";
  return os.str();
}

}  // namespace detail

/// Fuzzes the semi-discrete entropy balance on periodic random pairs.
inline CheckOutcome check_entropy_balance(std::uint64_t seed, std::size_t cases,
                                          const PSystem& model = {}, BalanceOptions options = {}) {
  CheckOutcome out{"entropy balance identity", cases, 0.0, 1e-12, {}};
  std::mt19937_64 rng(seed);
  for (std::size_t c = 0; c < cases; ++c) {
    const auto s = detail::random_psystem_pair(rng, 8, 64);
    const double lambda = std::max(compute_lambda(model, s.field), compute_lambda(model, s.field_bar));
    const auto report = entropy_balance_residual(model, s.field, s.field_bar, s.eps, s.sigma,
                                                 lambda, s.grid, BoundaryMode::Periodic, options);
    const double rel = report.max_relative_defect();
    out.worst = std::max(out.worst, rel);
    if (!(rel <= out.tolerance) && out.first_failure.empty())
      out.first_failure = detail::describe(s, c) + ": relative defect " + std::to_string(rel);
  }
  return out;
}

/// |p(t|tb)| <= C'(t-tb)^2 <= -C P(t|tb) on uniform random pairs in [lo, hi]^2.
inline CheckOutcome check_sandwich(std::uint64_t seed, std::size_t cases,
                                   const ConstitutiveLaw& law = ConstitutiveLaw::psystem(),
                                   double lo = 0.5, double hi = 4.0) {
  CheckOutcome out{"relative pressure sandwich", cases, 0.0, 1.0, {}};
  const auto k = sandwich_constants(law, lo, hi);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  for (std::size_t c = 0; c < cases; ++c) {
    const double tau = dist(rng);
    const double tau_bar = dist(rng);
    const double d2 = (tau - tau_bar) * (tau - tau_bar);
    const double a = std::abs(relative_p(law, tau, tau_bar));
    const double b = k.c_prime * d2;
    const double cc = -k.c * relative_P(law, tau, tau_bar);
    // ratio > 1 means a violation
    const double ratio = std::max(b > 0.0 ? a / b : (a > 0.0 ? INFINITY : 0.0),
                                  cc > 0.0 ? b / cc : (b > 0.0 ? INFINITY : 0.0));
    out.worst = std::max(out.worst, ratio);
    if (!(a <= b && b <= cc) && out.first_failure.empty()) {
      std::ostringstream os;
      os << "case " << c << " (tau=" << tau << ", tau_bar=" << tau_bar << ")";
      out.first_failure = os.str();
    }
  }
  return out;
}

/**
 * Pointwise Ru bound on random finitely supported states for theta in
 * {0.1, sigma/lambda, 10}. Every fourth case scales ub by 1e3.
 */
inline CheckOutcome check_ru_bound(std::uint64_t seed, std::size_t cases) {
  CheckOutcome out{"Ru bound", cases, 0.0, 1.0, {}};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> cells(8, 64);
  std::uniform_real_distribution<double> vel(-2.0, 2.0);
  std::uniform_real_distribution<double> log_eps(-3.0, 0.0);
  std::uniform_real_distribution<double> lam(0.5, 3.0);
  std::uniform_real_distribution<double> sig(0.5, 2.0);
  for (std::size_t c = 0; c < cases; ++c) {
    const std::size_t n = cells(rng);
    const double dx = 8.0 / static_cast<double>(n);
    const double scale = (c % 4 == 3) ? 1e3 : 1.0;
    std::vector<double> u(n, 0.0), u_bar(n, 0.0);
    for (std::size_t i = 2; i + 2 < n; ++i) {
      u[i] = vel(rng);
      u_bar[i] = scale * vel(rng);
    }
    const double eps = std::pow(10.0, log_eps(rng));
    const double lambda = lam(rng);
    const double sigma = sig(rng);
    for (double theta : {0.1, sigma / lambda, 10.0}) {
      const auto b = ru_bound_snapshot(u, u_bar, eps, lambda, theta, dx);
      const double ratio = b.rhs > 0.0 ? b.lhs / b.rhs : (b.lhs > 0.0 ? INFINITY : 0.0);
      out.worst = std::max(out.worst, ratio);
      if (!b.holds() && out.first_failure.empty()) {
        std::ostringstream os;
        os << "case " << c << " (N=" << n << ", eps=" << eps << ", lambda=" << lambda
           << ", theta=" << theta << "): lhs " << b.lhs << " > rhs " << b.rhs;
        out.first_failure = os.str();
      }
    }
  }
  return out;
}

/**
 * convection then relaxation at eps = 0 against the limit step: the tau
 * component must match bit for bit, u to 1e-14 relative per cell.
 */
inline CheckOutcome check_splitting_limit(std::uint64_t seed, std::size_t cases,
                                          const PSystem& model = {}) {
  CheckOutcome out{"splitting/limit identity", cases, 0.0, 1e-14, {}};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> frac(0.05, 1.0);
  for (std::size_t c = 0; c < cases; ++c) {
    auto s = detail::random_psystem_pair(rng, 8, 64);
    const double lambda = compute_lambda(model, s.field);
    const double dt = frac(rng) * 0.5 * s.grid.dx() / lambda;
    const auto bc = (c % 2) ? BoundaryMode::Periodic : BoundaryMode::ZeroFlux;
    const auto split = relaxation_step(model, convection_step(model, s.field, s.grid, dt, lambda, bc),
                                       s.grid, dt, 0.0, s.sigma, bc);
    const auto limit = limit_step(model, s.field, s.grid, dt, lambda, s.sigma, bc);
    for (std::size_t i = 0; i < split.size(); ++i) {
      const double a = split[i][1];
      const double b = limit[i][1];
      const double denom = std::max(std::abs(a), std::abs(b));
      const double rel = denom > 0.0 ? std::abs(a - b) / denom : 0.0;
      out.worst = std::max(out.worst, rel);
      if ((split[i][0] != limit[i][0] || rel > out.tolerance) && out.first_failure.empty()) {
        out.first_failure = detail::describe(s, c) + " at cell " + std::to_string(i);
        if (split[i][0] != limit[i][0]) out.first_failure += ": tau differs";
      }
    }
  }
  return out;
}

}  // namespace aprelax
