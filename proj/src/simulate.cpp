#include "regmix/simulate.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "regmix/rng.hpp"

namespace regmix {

Sim1Draw gen_simulation1(std::int64_t n, double sigma, std::array<double, 3> weights,
                         std::uint64_t seed) {
  const double wsum = weights[0] + weights[1] + weights[2];
  if (std::abs(wsum - 1.0) > 1e-12)
    throw std::invalid_argument("gen_simulation1: weights must sum to 1");
  if (!(sigma >= 0.0)) throw std::invalid_argument("gen_simulation1: sigma must be >= 0");

  const double b[3][2] = {{3.0, -1.0}, {1.0, 1.5}, {-1.0, 0.5}};
  std::mt19937_64 rng(derive_seed(seed, "sim1"));
  std::uniform_real_distribution<double> ucomp(0.0, 1.0);
  std::uniform_real_distribution<double> ux(-1.0, 3.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  Eigen::MatrixXd xs(n, 2);
  Eigen::VectorXd ys(n);
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    const double u = ucomp(rng);
    const int comp = u < weights[0] ? 0 : (u < weights[0] + weights[1] ? 1 : 2);
    const double x = ux(rng);
    xs(i, 0) = 1.0;
    xs(i, 1) = x;
    ys[i] = b[comp][0] + b[comp][1] * x + sigma * gauss(rng);
    labels[static_cast<std::size_t>(i)] = comp;
  }

  std::vector<Atom> atoms;
  for (int j = 0; j < 3; ++j) {
    Eigen::VectorXd beta(2);
    beta << b[j][0], b[j][1];
    atoms.push_back({beta, weights[static_cast<std::size_t>(j)]});
  }
  return {Dataset(std::move(xs), std::move(ys), sigma > 0.0 ? std::optional<double>(sigma)
                                                            : std::nullopt),
          std::move(labels), DiscreteMeasure(std::move(atoms))};
}

Sim1Draw gen_simulation1(std::int64_t n, std::uint64_t seed) {
  return gen_simulation1(n, 0.5, {0.3, 0.3, 0.4}, seed);
}

Sim2Draw gen_simulation2(std::int64_t n, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("gen_simulation2: sigma must be >= 0");
  std::mt19937_64 rng(derive_seed(seed, "sim2"));
  std::uniform_real_distribution<double> ucoin(0.0, 1.0);
  std::uniform_real_distribution<double> uangle(0.0, 2.0 * M_PI);
  std::uniform_real_distribution<double> ux(-1.0, 3.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  Eigen::MatrixXd xs(n, 2), betas(n, 2);
  Eigen::VectorXd ys(n);
  for (std::int64_t i = 0; i < n; ++i) {
    const double r = ucoin(rng) < 0.5 ? 1.0 : 2.0;
    const double angle = uangle(rng);
    betas(i, 0) = r * std::cos(angle);
    betas(i, 1) = r * std::sin(angle);
    const double x = ux(rng);
    xs(i, 0) = 1.0;
    xs(i, 1) = x;
    ys[i] = betas(i, 0) + betas(i, 1) * x + sigma * gauss(rng);
  }
  return {Dataset(std::move(xs), std::move(ys), sigma > 0.0 ? std::optional<double>(sigma)
                                                            : std::nullopt),
          std::move(betas)};
}

Sim2Draw gen_simulation2(std::int64_t n, std::uint64_t seed) {
  return gen_simulation2(n, 0.2, seed);
}

}  // namespace regmix
