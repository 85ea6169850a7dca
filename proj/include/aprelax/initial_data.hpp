#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <string_view>

#include "aprelax/grid.hpp"
#include "aprelax/models.hpp"

namespace aprelax {

enum class InitialKind { Discontinuous, Smooth };

/// Primary-variable profile: 2 left of the origin and 1 right of it, or
/// exp(-100 x^2) + 1.
struct InitialData {
  InitialKind kind = InitialKind::Smooth;

  [[nodiscard]] double operator()(double x) const {
    if (kind == InitialKind::Discontinuous) return x < 0.0 ? 2.0 : 1.0;
    return std::exp(-100.0 * x * x) + 1.0;
  }
};

inline std::string_view to_string(InitialKind kind) {
  return kind == InitialKind::Discontinuous ? "discontinuous" : "smooth";
}

/**
 * Well-prepared data: the primary component is sampled at cell centres, the
 * other components start at zero and the relaxed component is set from the
 * limit relation, so the stiff source vanishes at t = 0 and no initial layer
 * forms.
 */
template <RelaxationModel M, class Profile>
Field<M::dim> well_prepared_state(const M& model, const Profile& profile, const Grid1D& grid,
                                  double sigma, BoundaryMode bc = BoundaryMode::ZeroFlux) {
  Field<M::dim> field(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    field[i] = {};
    field[i][0] = profile(grid.center(i));
  }
  for (std::size_t i = 0; i < grid.size(); ++i) model.check_admissible(field[i], i);
  return limit_relation(model, std::move(field), grid, sigma, bc);
}

template <RelaxationModel M>
Field<M::dim> initial_state(const M& model, InitialData ic, const Grid1D& grid, double sigma,
                            BoundaryMode bc = BoundaryMode::ZeroFlux) {
  return well_prepared_state(model, ic, grid, sigma, bc);
}

}  // namespace aprelax
