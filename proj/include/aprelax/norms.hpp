#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "aprelax/constitutive_law.hpp"
#include "aprelax/grid.hpp"

namespace aprelax {

/// Space-time norms of a cell sequence v_i(t) sampled at the time steps.
struct DiscreteNorms {
  double dx_linf = 0.0;        ///< sup |v_{i+1} - v_i| / dx
  double wide_dxx_linf = 0.0;  ///< sup |v_{i+2} - 2v_i + v_{i-2}| / (2dx)^2
  double dxx_linf = 0.0;       ///< sup |v_{i+1} - 2v_i + v_{i-1}| / dx^2
  double wide_dtx_l2 = 0.0;    ///< (int sum dx |d/dt (v_{i+1} - v_{i-1}) / 2dx|^2)^(1/2)
  double dxx_l2 = 0.0;         ///< (int sum dx |(v_{i+1} - 2v_i + v_{i-1}) / dx^2|^2)^(1/2)
};

/**
 * Streams samples (t_n, v^n) and accumulates the five norms. Sups run over
 * samples with t < T (all but the last one) and over indices whose stencil
 * lies inside the array. Time integrals use left-endpoint weights; the time
 * derivative is the forward difference between consecutive samples.
 */
class NormAccumulator {
 public:
  explicit NormAccumulator(double dx) : dx_(dx) {}

  void add(double t, std::span<const double> v) {
    if (samples_ > 0) {
      if (v.size() != prev_.size()) throw std::invalid_argument("NormAccumulator: size changed");
      const double dt = t - prev_t_;
      if (!(dt > 0.0)) throw std::invalid_argument("NormAccumulator: times must increase");
      close_interval(v, dt);
    }
    prev_.assign(v.begin(), v.end());
    prev_t_ = t;
    ++samples_;
  }

  [[nodiscard]] std::size_t samples() const { return samples_; }

  [[nodiscard]] DiscreteNorms result() const {
    if (samples_ < 2) throw std::invalid_argument("NormAccumulator: need at least 2 samples");
    DiscreteNorms out = sups_;
    out.wide_dtx_l2 = std::sqrt(dtx_sq_);
    out.dxx_l2 = std::sqrt(dxx_sq_);
    return out;
  }

 private:
  // The interval [t_prev, t) is closed: prev_ is a sample in [0, T).
  void close_interval(std::span<const double> next, double dt) {
    const std::size_t n = prev_.size();
    const double dx = dx_;
    double dtx = 0.0;
    double dxx = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i)
      sups_.dx_linf = std::max(sups_.dx_linf, std::abs(prev_[i + 1] - prev_[i]) / dx);
    for (std::size_t i = 2; i + 2 < n; ++i)
      sups_.wide_dxx_linf = std::max(
          sups_.wide_dxx_linf,
          std::abs(prev_[i + 2] - 2.0 * prev_[i] + prev_[i - 2]) / (4.0 * dx * dx));
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double d2 = (prev_[i + 1] - 2.0 * prev_[i] + prev_[i - 1]) / (dx * dx);
      sups_.dxx_linf = std::max(sups_.dxx_linf, std::abs(d2));
      dxx += dx * d2 * d2;
      const double d_now = (prev_[i + 1] - prev_[i - 1]) / (2.0 * dx);
      const double d_next = (next[i + 1] - next[i - 1]) / (2.0 * dx);
      const double rate = (d_next - d_now) / dt;
      dtx += dx * rate * rate;
    }
    dtx_sq_ += dt * dtx;
    dxx_sq_ += dt * dxx;
  }

  double dx_;
  std::vector<double> prev_;
  double prev_t_ = 0.0;
  std::size_t samples_ = 0;
  DiscreteNorms sups_;
  double dtx_sq_ = 0.0;
  double dxx_sq_ = 0.0;
};

/// Norms of a stored trajectory; times and snapshots must have equal length.
inline DiscreteNorms discrete_norms(std::span<const double> times,
                                    std::span<const std::vector<double>> trajectory, double dx) {
  if (times.size() != trajectory.size())
    throw std::invalid_argument("discrete_norms: times and trajectory differ in length");
  if (trajectory.size() < 2) throw std::invalid_argument("discrete_norms: need at least 2 samples");
  NormAccumulator acc(dx);
  for (std::size_t k = 0; k < times.size(); ++k) acc.add(times[k], trajectory[k]);
  return acc.result();
}

/// The regularity quantities that the eps^4 estimate assumes bounded by K,
/// measured on a limit-scheme p-system trajectory.
struct RegularityDiagnostics {
  double dtx_p_l2 = 0.0;       ///< ||D~tx p(taub)||_L2
  double wide_dxx_p_linf = 0.0;  ///< ||D~xx p(taub)||_Linf
  double dxx_tau_linf = 0.0;   ///< ||Dxx taub||_Linf
  double dx_tau_linf = 0.0;    ///< ||Dx taub||_Linf
  double dxx_u_l2 = 0.0;       ///< ||Dxx ub||_L2

  [[nodiscard]] double max() const {
    return std::max({dtx_p_l2, wide_dxx_p_linf, dxx_tau_linf, dx_tau_linf, dxx_u_l2});
  }
};

/// Streams (t, taub, ub) snapshots into the three accumulators behind
/// RegularityDiagnostics.
class RegularityAccumulator {
 public:
  RegularityAccumulator(ConstitutiveLaw law, double dx)
      : law_(law), pressure_(dx), tau_(dx), velocity_(dx) {}

  void add(double t, std::span<const double> tau_bar, std::span<const double> u_bar) {
    std::vector<double> p(tau_bar.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = pressure(law_, tau_bar[i]);
    pressure_.add(t, p);
    tau_.add(t, tau_bar);
    velocity_.add(t, u_bar);
  }

  [[nodiscard]] std::size_t samples() const { return tau_.samples(); }

  [[nodiscard]] RegularityDiagnostics result() const {
    const auto p = pressure_.result();
    const auto tau = tau_.result();
    const auto u = velocity_.result();
    return {p.wide_dtx_l2, p.wide_dxx_linf, tau.dxx_linf, tau.dx_linf, u.dxx_l2};
  }

 private:
  ConstitutiveLaw law_;
  NormAccumulator pressure_;
  NormAccumulator tau_;
  NormAccumulator velocity_;
};

}  // namespace aprelax
