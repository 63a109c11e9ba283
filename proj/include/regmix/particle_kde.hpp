#pragma once

#include <Eigen/Dense>
#include <stdexcept>

#include "regmix/kernel.hpp"

namespace regmix {

/// Kernel density estimate determined by movable particle locations, a fixed
/// bandwidth, and a kernel profile:
///   g(b) = (1 / (n_p h^d)) sum_l v(|b - p_l|^2 / h^2).
struct ParticleKde {
  Eigen::MatrixXd points;  // n_p x d
  double bandwidth;
  KernelProfile profile;

  ParticleKde(Eigen::MatrixXd pts, double h, KernelProfile prof)
      : points(std::move(pts)), bandwidth(h), profile(std::move(prof)) {
    if (points.rows() < 1) throw std::invalid_argument("ParticleKde: no particles");
    if (!(bandwidth > 0.0)) throw std::invalid_argument("ParticleKde: bandwidth must be > 0");
    if (!points.allFinite()) throw std::invalid_argument("ParticleKde: non-finite particle");
    if (profile.dim() != static_cast<int>(points.cols()))
      throw std::invalid_argument("ParticleKde: profile dimension mismatch");
  }

  Eigen::Index particle_count() const { return points.rows(); }
  int dim() const { return static_cast<int>(points.cols()); }

  double log_density(const Eigen::VectorXd& query) const;
  double density(const Eigen::VectorXd& query) const { return std::exp(log_density(query)); }
};

}  // namespace regmix
