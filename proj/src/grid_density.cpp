#include "regmix/grid_density.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "regmix/rng.hpp"

namespace regmix {

GridDensity::GridDensity(QuadratureGrid grid, Eigen::VectorXd values, bool renormalize)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.node_count())
    throw std::invalid_argument("GridDensity: value count does not match grid");
  if ((values_.array() < 0.0).any())
    throw std::invalid_argument("GridDensity: negative density value");
  const double m = mass();
  if (renormalize) {
    if (!(m > 0.0)) throw std::invalid_argument("GridDensity: zero total mass");
    values_ /= m;
  } else if (std::abs(m - 1.0) > 1e-6) {
    throw std::invalid_argument("GridDensity: mass " + std::to_string(m) + " != 1");
  }
}

GridDensity GridDensity::uniform(QuadratureGrid grid) {
  double volume = grid.cell_volume() * static_cast<double>(grid.node_count());
  Eigen::VectorXd v = Eigen::VectorXd::Constant(grid.node_count(), 1.0 / volume);
  return GridDensity(std::move(grid), std::move(v));
}

double GridDensity::boundary_mass() const {
  const int d = grid_.dim();
  double acc = 0.0;
  for (std::int64_t i = 0; i < values_.size(); ++i) {
    const auto idx = grid_.unflatten(i);
    for (int k = 0; k < d; ++k) {
      if (idx[static_cast<std::size_t>(k)] == 0 ||
          idx[static_cast<std::size_t>(k)] == grid_.nodes_per_dim()[static_cast<std::size_t>(k)] - 1) {
        acc += values_[i];
        break;
      }
    }
  }
  return acc * grid_.cell_volume();
}

Eigen::MatrixXd sample_from_grid_density(const GridDensity& g, std::int64_t m,
                                         std::uint64_t seed) {
  const auto& grid = g.grid();
  const int d = grid.dim();
  // Inverse CDF over flattened cells.
  Eigen::VectorXd cdf(g.values().size());
  double acc = 0.0;
  for (std::int64_t i = 0; i < g.values().size(); ++i) {
    acc += g.values()[i];
    cdf[i] = acc;
  }
  if (!(acc > 0.0)) throw std::invalid_argument("sample_from_grid_density: zero mass");
  cdf /= acc;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Eigen::MatrixXd out(m, d);
  for (std::int64_t s = 0; s < m; ++s) {
    const double u = unif(rng);
    const double* begin = cdf.data();
    const double* it = std::lower_bound(begin, begin + cdf.size(), u);
    std::int64_t cell = std::min<std::int64_t>(it - begin, cdf.size() - 1);
    const auto idx = grid.unflatten(cell);
    for (int k = 0; k < d; ++k) {
      const double lo = grid.lower()[k] + idx[static_cast<std::size_t>(k)] * grid.step(k);
      out(s, k) = lo + unif(rng) * grid.step(k);
    }
  }
  return out;
}

}  // namespace regmix
