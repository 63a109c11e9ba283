#include "regmix/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "regmix/errors.hpp"

namespace regmix {

QuadratureGrid::QuadratureGrid(Eigen::VectorXd lower, Eigen::VectorXd upper,
                               std::vector<int> nodes_per_dim)
    : lower_(std::move(lower)), upper_(std::move(upper)), nodes_(std::move(nodes_per_dim)) {
  const int d = static_cast<int>(lower_.size());
  if (d < 1 || upper_.size() != d || static_cast<int>(nodes_.size()) != d)
    throw std::invalid_argument("QuadratureGrid: inconsistent dimensions");
  count_ = 1;
  cell_volume_ = 1.0;
  for (int k = 0; k < d; ++k) {
    if (nodes_[k] < 8)
      throw std::invalid_argument("QuadratureGrid: need >= 8 nodes per dimension");
    if (!(upper_[k] > lower_[k]))
      throw std::invalid_argument("QuadratureGrid: box must have positive volume");
    count_ *= nodes_[k];
    cell_volume_ *= step(k);
  }
}

QuadratureGrid QuadratureGrid::cube(int dim, double lo, double hi, int nodes_per_dim) {
  return QuadratureGrid(Eigen::VectorXd::Constant(dim, lo),
                        Eigen::VectorXd::Constant(dim, hi),
                        std::vector<int>(static_cast<std::size_t>(dim), nodes_per_dim));
}

Eigen::VectorXd QuadratureGrid::axis(int d) const {
  Eigen::VectorXd a(nodes_[d]);
  const double s = step(d);
  for (int i = 0; i < nodes_[d]; ++i) a[i] = lower_[d] + (i + 0.5) * s;
  return a;
}

Eigen::MatrixXd QuadratureGrid::node_matrix() const {
  const int d = dim();
  Eigen::MatrixXd nodes(count_, d);
  std::vector<Eigen::VectorXd> axes;
  axes.reserve(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) axes.push_back(axis(k));
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  for (std::int64_t r = 0; r < count_; ++r) {
    for (int k = 0; k < d; ++k) nodes(r, k) = axes[static_cast<std::size_t>(k)][idx[static_cast<std::size_t>(k)]];
    for (int k = d - 1; k >= 0; --k) {  // last dimension fastest
      if (++idx[static_cast<std::size_t>(k)] < nodes_[static_cast<std::size_t>(k)]) break;
      idx[static_cast<std::size_t>(k)] = 0;
    }
  }
  return nodes;
}

std::vector<int> QuadratureGrid::unflatten(std::int64_t idx) const {
  const int d = dim();
  std::vector<int> out(static_cast<std::size_t>(d));
  for (int k = d - 1; k >= 0; --k) {
    out[static_cast<std::size_t>(k)] = static_cast<int>(idx % nodes_[static_cast<std::size_t>(k)]);
    idx /= nodes_[static_cast<std::size_t>(k)];
  }
  return out;
}

double integrate_on_grid(const Eigen::VectorXd& node_values, const QuadratureGrid& grid) {
  if (node_values.size() != grid.node_count())
    throw std::invalid_argument("integrate_on_grid: field size does not match grid");
  double sum = 0.0, comp = 0.0;  // Kahan: grids can have millions of nodes
  for (std::int64_t i = 0; i < node_values.size(); ++i) {
    const double f = node_values[i];
    if (!std::isfinite(f))
      throw quadrature_error(i, "integrate_on_grid: non-finite integrand at node " +
                                    std::to_string(i));
    const double y = f - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum * grid.cell_volume();
}

void IntegrationPolicy::validate() const {
  const int d = static_cast<int>(box_lower.size());
  if (d < 1 || box_upper.size() != d)
    throw std::invalid_argument("IntegrationPolicy: bad box");
  if (mode == Mode::grid) {
    grid();  // constructor validates
  } else if (mc_samples < 100) {
    throw std::invalid_argument("IntegrationPolicy: need >= 100 MC samples");
  }
}

IntegrationPolicy IntegrationPolicy::grid_box(int dim, double lo, double hi,
                                              int nodes_per_dim) {
  IntegrationPolicy p;
  p.mode = Mode::grid;
  p.box_lower = Eigen::VectorXd::Constant(dim, lo);
  p.box_upper = Eigen::VectorXd::Constant(dim, hi);
  p.nodes_per_dim.assign(static_cast<std::size_t>(dim), nodes_per_dim);
  p.validate();
  return p;
}

IntegrationPolicy IntegrationPolicy::monte_carlo(int dim, double lo, double hi,
                                                 std::int64_t samples,
                                                 std::uint64_t seed) {
  IntegrationPolicy p;
  p.mode = Mode::monte_carlo;
  p.box_lower = Eigen::VectorXd::Constant(dim, lo);
  p.box_upper = Eigen::VectorXd::Constant(dim, hi);
  p.mc_samples = samples;
  p.mc_seed = seed;
  p.validate();
  return p;
}

IntegrationPolicy IntegrationPolicy::default_for(int dim) {
  if (dim <= 2) return grid_box(dim, -4.0, 4.0, 161);
  return monte_carlo(dim, -4.0, 4.0, 8192, 0);
}

}  // namespace regmix
