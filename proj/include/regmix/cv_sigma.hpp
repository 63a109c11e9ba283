#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "regmix/dataset.hpp"
#include "regmix/discrete_measure.hpp"

namespace regmix {

/// Fits training data at a candidate sigma and returns the estimator used to
/// score held-out points (a discrete measure: the empirical distribution of
/// the fitted particles).
using CvFitter = std::function<DiscreteMeasure(const Dataset& train, double sigma)>;

struct CvResult {
  double sigma_hat = 0.0;
  std::vector<double> sigma_grid;
  std::vector<double> curve;          // CV(sigma); NaN where excluded
  std::vector<uint8_t> excluded;      // candidates with a failed fold
  std::vector<std::vector<Eigen::Index>> folds;
};

/// K-fold cross-validation of the noise scale: for each candidate sigma and
/// fold, fit on the complement and accumulate the negative held-out
/// log-likelihood; the minimizing candidate wins. Candidates where any fold
/// fit failed are excluded; if all fail, throws.
CvResult cv_sigma(const Dataset& data, int folds, std::vector<double> sigma_grid,
                  const CvFitter& fitter, std::uint64_t seed);

/// 12 log-spaced candidates spanning [0.05, 2] times the residual standard
/// deviation of a pooled least-squares fit.
std::vector<double> default_sigma_grid(const Dataset& data);

}  // namespace regmix
