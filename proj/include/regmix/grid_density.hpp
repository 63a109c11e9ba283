#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "regmix/quadrature.hpp"

namespace regmix {

/// Probability density discretized on a QuadratureGrid: one nonnegative value
/// per node, integrating to one under the midpoint rule (checked to 1e-6).
class GridDensity {
 public:
  GridDensity(QuadratureGrid grid, Eigen::VectorXd values, bool renormalize = false);

  static GridDensity uniform(QuadratureGrid grid);

  const QuadratureGrid& grid() const { return grid_; }
  const Eigen::VectorXd& values() const { return values_; }
  double mass() const { return integrate_on_grid(values_, grid_); }

  /// Fraction of mass in cells touching the box boundary. Large values mean
  /// the box clips the coefficient region.
  double boundary_mass() const;

 private:
  QuadratureGrid grid_;
  Eigen::VectorXd values_;
};

/// Draws m points: a cell with probability proportional to value * volume,
/// then uniform inside the cell. Deterministic given the seed.
Eigen::MatrixXd sample_from_grid_density(const GridDensity& g, std::int64_t m,
                                         std::uint64_t seed);

}  // namespace regmix
