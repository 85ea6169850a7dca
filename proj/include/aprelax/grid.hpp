#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace aprelax {

enum class BoundaryMode { ZeroFlux, Periodic };

/// Uniform cell-centred mesh on (a, b) with N cells.
class Grid1D {
 public:
  Grid1D(double a, double b, std::size_t n) : a_(a), b_(b), n_(n) {
    if (n < 3) {
      std::ostringstream msg;
      msg << "Grid1D: need at least 3 cells, got " << n;
      throw std::invalid_argument(msg.str());
    }
    if (!(b > a)) throw std::invalid_argument("Grid1D: domain must satisfy a < b");
    dx_ = (b - a) / static_cast<double>(n);
  }

  [[nodiscard]] double a() const { return a_; }
  [[nodiscard]] double b() const { return b_; }
  [[nodiscard]] std::size_t size() const { return n_; }
  [[nodiscard]] double dx() const { return dx_; }
  [[nodiscard]] double center(std::size_t i) const {
    return a_ + (static_cast<double>(i) + 0.5) * dx_;
  }

 private:
  double a_;
  double b_;
  std::size_t n_;
  double dx_;
};

template <std::size_t Dim>
using State = std::array<double, Dim>;

/// Per-cell state vectors; component order is fixed by the model.
template <std::size_t Dim>
struct Field {
  std::vector<State<Dim>> cells;

  Field() = default;
  explicit Field(std::size_t n) : cells(n, State<Dim>{}) {}

  [[nodiscard]] std::size_t size() const { return cells.size(); }
  State<Dim>& operator[](std::size_t i) { return cells[i]; }
  const State<Dim>& operator[](std::size_t i) const { return cells[i]; }

  [[nodiscard]] std::vector<double> component(std::size_t k) const {
    std::vector<double> out(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) out[i] = cells[i][k];
    return out;
  }
  void set_component(std::size_t k, std::span<const double> values) {
    if (values.size() != cells.size()) throw std::invalid_argument("Field: component size mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) cells[i][k] = values[i];
  }

  friend bool operator==(const Field&, const Field&) = default;
};

/**
 * Maps a possibly out-of-range cell index onto the array. ZeroFlux uses
 * ghost cells that copy the adjacent interior state (clamping), Periodic
 * wraps around.
 */
inline std::size_t neighbor_index(std::ptrdiff_t i, std::size_t n, BoundaryMode bc) {
  const auto sn = static_cast<std::ptrdiff_t>(n);
  if (bc == BoundaryMode::Periodic) {
    std::ptrdiff_t r = i % sn;
    if (r < 0) r += sn;
    return static_cast<std::size_t>(r);
  }
  if (i < 0) return 0;
  if (i >= sn) return n - 1;
  return static_cast<std::size_t>(i);
}

/// Value of a scalar sequence at index i under the boundary mode.
inline double at(std::span<const double> v, std::ptrdiff_t i, BoundaryMode bc) {
  return v[neighbor_index(i, v.size(), bc)];
}

inline std::string to_string(BoundaryMode bc) {
  return bc == BoundaryMode::Periodic ? "periodic" : "zeroflux";
}

}  // namespace aprelax
