#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace regmix {

/// Tensor-product midpoint grid over a box. Nodes sit at cell centers, so the
/// midpoint rule is a plain weighted sum and densities stay nonnegative.
/// Flattened node index: dimension 0 varies slowest, the last dimension
/// fastest.
class QuadratureGrid {
 public:
  QuadratureGrid(Eigen::VectorXd lower, Eigen::VectorXd upper,
                 std::vector<int> nodes_per_dim);

  /// Cube grid: same bounds and resolution in every dimension.
  static QuadratureGrid cube(int dim, double lo, double hi, int nodes_per_dim);

  int dim() const { return static_cast<int>(lower_.size()); }
  const Eigen::VectorXd& lower() const { return lower_; }
  const Eigen::VectorXd& upper() const { return upper_; }
  const std::vector<int>& nodes_per_dim() const { return nodes_; }
  std::int64_t node_count() const { return count_; }
  double cell_volume() const { return cell_volume_; }
  double step(int d) const { return (upper_[d] - lower_[d]) / nodes_[d]; }

  /// Node coordinates along one dimension (cell centers).
  Eigen::VectorXd axis(int d) const;
  /// All node coordinates, node_count x dim. Row order matches the flattened
  /// index convention.
  Eigen::MatrixXd node_matrix() const;
  /// Multi-index of a flattened node index.
  std::vector<int> unflatten(std::int64_t idx) const;

 private:
  Eigen::VectorXd lower_, upper_;
  std::vector<int> nodes_;
  std::int64_t count_ = 0;
  double cell_volume_ = 0.0;
};

/// Midpoint-rule integral of a field sampled at the grid nodes.
/// A non-finite value raises quadrature_error naming the node.
double integrate_on_grid(const Eigen::VectorXd& node_values,
                         const QuadratureGrid& grid);

/// How the coefficient-space integrals are evaluated. Grid quadrature for low
/// dimension; self-normalized importance sampling for d >= 3 where the grid
/// cost blows up exponentially.
struct IntegrationPolicy {
  enum class Mode { grid, monte_carlo };

  Mode mode = Mode::grid;
  Eigen::VectorXd box_lower, box_upper;  // shared by both modes
  std::vector<int> nodes_per_dim;        // grid mode
  std::int64_t mc_samples = 8192;        // monte_carlo mode, >= 100
  std::uint64_t mc_seed = 0;

  QuadratureGrid grid() const { return QuadratureGrid(box_lower, box_upper, nodes_per_dim); }
  void validate() const;

  static IntegrationPolicy grid_box(int dim, double lo, double hi, int nodes_per_dim);
  static IntegrationPolicy monte_carlo(int dim, double lo, double hi,
                                       std::int64_t samples, std::uint64_t seed);
  /// Grid over [-4,4]^d with 161 nodes/dim for d <= 2, Monte Carlo above.
  static IntegrationPolicy default_for(int dim);
};

}  // namespace regmix
