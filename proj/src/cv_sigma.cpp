#include "regmix/cv_sigma.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "regmix/likelihood.hpp"
#include "regmix/rng.hpp"

namespace regmix {

std::vector<double> default_sigma_grid(const Dataset& data) {
  // residual SD of one pooled least-squares line
  Eigen::VectorXd beta =
      (data.xs().transpose() * data.xs())
          .ldlt()
          .solve(data.xs().transpose() * data.ys());
  const Eigen::VectorXd res = data.ys() - data.xs() * beta;
  const double sd = std::sqrt(res.squaredNorm() / std::max<double>(1.0, res.size() - data.dim()));
  const double lo = 0.05 * sd, hi = 2.0 * sd;
  const int count = 12;
  std::vector<double> grid(count);
  for (int i = 0; i < count; ++i)
    grid[static_cast<std::size_t>(i)] =
        std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (count - 1));
  return grid;
}

CvResult cv_sigma(const Dataset& data, int folds, std::vector<double> sigma_grid,
                  const CvFitter& fitter, std::uint64_t seed) {
  if (folds < 2) throw std::invalid_argument("cv_sigma: need at least 2 folds");
  if (sigma_grid.empty()) throw std::invalid_argument("cv_sigma: empty sigma grid");
  for (double s : sigma_grid)
    if (!(s > 0.0)) throw std::invalid_argument("cv_sigma: candidates must be > 0");
  if (data.n() < folds) throw std::invalid_argument("cv_sigma: fewer rows than folds");

  CvResult result;
  result.sigma_grid = std::move(sigma_grid);

  // seeded shuffle, then round-robin so fold sizes differ by at most one
  std::vector<Eigen::Index> order(static_cast<std::size_t>(data.n()));
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(derive_seed(seed, "cv-folds"));
  std::shuffle(order.begin(), order.end(), rng);
  result.folds.assign(static_cast<std::size_t>(folds), {});
  for (std::size_t k = 0; k < order.size(); ++k)
    result.folds[k % static_cast<std::size_t>(folds)].push_back(order[k]);

  std::vector<std::vector<Eigen::Index>> train_rows(static_cast<std::size_t>(folds));
  for (int c = 0; c < folds; ++c)
    for (int o = 0; o < folds; ++o)
      if (o != c)
        train_rows[static_cast<std::size_t>(c)].insert(
            train_rows[static_cast<std::size_t>(c)].end(),
            result.folds[static_cast<std::size_t>(o)].begin(),
            result.folds[static_cast<std::size_t>(o)].end());

  const std::size_t ns = result.sigma_grid.size();
  result.curve.assign(ns, 0.0);
  result.excluded.assign(ns, 0);
  for (std::size_t s = 0; s < ns; ++s) {
    const double sigma = result.sigma_grid[s];
    double acc = 0.0;
    for (int c = 0; c < folds && !result.excluded[s]; ++c) {
      try {
        Dataset train = data.subset(train_rows[static_cast<std::size_t>(c)]).with_sigma(sigma);
        Dataset test = data.subset(result.folds[static_cast<std::size_t>(c)]).with_sigma(sigma);
        const DiscreteMeasure g_hat = fitter(train, sigma);
        acc -= incomplete_loglik(g_hat, test);
      } catch (const std::exception&) {
        result.excluded[s] = 1;
      }
    }
    result.curve[s] = result.excluded[s] ? std::numeric_limits<double>::quiet_NaN() : acc;
  }

  int best = -1;
  for (std::size_t s = 0; s < ns; ++s) {
    if (result.excluded[s]) continue;
    if (best < 0 || result.curve[s] < result.curve[static_cast<std::size_t>(best)])
      best = static_cast<int>(s);
  }
  if (best < 0) throw std::runtime_error("cv_sigma: every candidate failed");
  result.sigma_hat = result.sigma_grid[static_cast<std::size_t>(best)];
  return result;
}

}  // namespace regmix
