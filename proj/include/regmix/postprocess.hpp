#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "regmix/discrete_measure.hpp"
#include "regmix/kernel.hpp"

namespace regmix {

struct KdeEval {
  double density;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;
};

/// Density, gradient, and Hessian of the kernel density estimate built on
/// `points` with bandwidth h, evaluated analytically at `query`.
KdeEval kde_eval_grad_hess(const Eigen::MatrixXd& points, double h,
                           const KernelProfile& profile, const Eigen::VectorXd& query);

struct MeanShiftResult {
  Eigen::MatrixXd modes;    // merged modes, sorted lexicographically
  std::vector<int> labels;  // per start point; -1 if it failed to converge
};

/// Mode seeking by the weighted-mean fixed point
///   m(x) = sum_j w(|x-p_j|^2/h^2) p_j / sum_j w(...),
/// iterated from each start point (the sample itself by default) until the
/// displacement drops below 1e-6. Limits closer than 0.1 h are merged.
MeanShiftResult mean_shift(const Eigen::MatrixXd& points, double h,
                           const KernelProfile& profile,
                           const std::optional<Eigen::MatrixXd>& start_points = {});

/// Discrete measure built from mean-shift output: one atom per mode, weighted
/// by the fraction of start points that converged to it (unconverged start
/// points are dropped and the weights renormalized).
DiscreteMeasure measure_from_modes(const MeanShiftResult& ms);

/// Ridge extraction: project the KDE gradient onto the span of the
/// (d - ridge_dim) Hessian eigenvectors with smallest eigenvalues and step by
/// the projected mean-shift displacement, until the projected gradient norm
/// falls below 1e-6. Returns the converged points.
Eigen::MatrixXd scms(const Eigen::MatrixXd& points, double h, const KernelProfile& profile,
                     int ridge_dim,
                     const std::optional<Eigen::MatrixXd>& start_points = {});

}  // namespace regmix
