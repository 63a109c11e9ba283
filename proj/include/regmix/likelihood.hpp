#pragma once

#include <vector>

#include "regmix/dataset.hpp"
#include "regmix/discrete_measure.hpp"
#include "regmix/grid_density.hpp"
#include "regmix/particle_kde.hpp"

namespace regmix {

/// Centered Gaussian density (1 / (sigma sqrt(2 pi))) exp(-r^2 / (2 sigma^2)).
double gaussian_density(double r, double sigma);
double log_gaussian_density(double r, double sigma);

/// Marginal log-likelihood sum_i log integral phi_sigma(y_i - x_i' b) dG(b).
/// Exact finite sum for a discrete G; midpoint quadrature on the grid for a
/// grid density; grid or Monte Carlo per policy for a particle KDE. All
/// mixture sums run in log space with max shifts, so small sigmas do not
/// underflow. Throws normalization_error if some observation's mixture
/// density vanishes entirely.
double incomplete_loglik(const DiscreteMeasure& g, const Dataset& data);
double incomplete_loglik(const GridDensity& g, const Dataset& data);
double incomplete_loglik(const ParticleKde& g, const Dataset& data,
                         const IntegrationPolicy& policy);
/// Particle KDE with the default policy for its dimension.
double incomplete_loglik(const ParticleKde& g, const Dataset& data);

/// Maximum-posterior component per observation:
///   argmax_j pi_j phi_sigma(y_i - x_i' beta_j),
/// ties broken toward the lowest atom index.
std::vector<int> posterior_cluster_assign(const DiscreteMeasure& g, const Dataset& data);

}  // namespace regmix
