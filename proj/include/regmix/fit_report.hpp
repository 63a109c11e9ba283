#pragma once

#include <optional>
#include <vector>

#include "regmix/discrete_measure.hpp"
#include "regmix/grid_density.hpp"
#include "regmix/particle_kde.hpp"

namespace regmix {

/// Outcome of a fitting run. Exactly which estimator fields are set depends on
/// the method: density fits fill `grid`, particle fits fill `kde` plus its
/// aggregated `atoms`, post-processing fills `atoms` only.
struct FitReport {
  std::optional<GridDensity> grid;
  std::optional<ParticleKde> kde;
  std::optional<DiscreteMeasure> atoms;

  /// Incomplete log-likelihood per outer iteration, including the final state;
  /// non-decreasing up to 1e-8 * (1 + |L|) per step.
  std::vector<double> loglik_trace;
  int iterations = 0;
  bool converged = false;
  double wall_seconds = 0.0;
};

}  // namespace regmix
