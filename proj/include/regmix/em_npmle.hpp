#pragma once

#include <cstdint>

#include "regmix/dataset.hpp"
#include "regmix/fit_report.hpp"
#include "regmix/grid_density.hpp"

namespace regmix {

struct NpmleOptions {
  /// Stop when ||g(t+1) - g(t)||_2 (density values, sqrt(cell volume) metric)
  /// falls below this.
  double l2_tol = 1e-5;
  int max_iter = 500;
};

/// Posterior density of the coefficient given one observation: node-wise
/// phi_sigma(y - x'b) g(b), renormalized on the grid. `observation` only tags
/// the error when the normalizer vanishes.
GridDensity posterior_density(const GridDensity& g, const Eigen::VectorXd& x, double y,
                              double sigma, std::int64_t observation = -1);

/// One fixed-point step: the average of the n posterior densities.
GridDensity em_npmle_step(const GridDensity& g, const Dataset& data);

/// Iterates em_npmle_step from `init` until the grid-L2 distance between
/// consecutive iterates drops below l2_tol or max_iter is hit. The returned
/// trace holds the incomplete log-likelihood of every iterate including the
/// final one; it is non-decreasing up to quadrature noise.
FitReport run_em_npmle(const Dataset& data, const GridDensity& init,
                       const NpmleOptions& opts = {});

}  // namespace regmix
