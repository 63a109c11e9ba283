#pragma once

#include <Eigen/Dense>
#include <vector>

namespace regmix {

struct Atom {
  Eigen::VectorXd beta;
  double weight;
};

/// Finitely supported probability measure on coefficient space. Exact
/// duplicate atoms are merged at construction; weights must be positive and
/// sum to one within 1e-12.
class DiscreteMeasure {
 public:
  explicit DiscreteMeasure(std::vector<Atom> atoms);

  /// Equal-weight empirical measure of a point set (rows of `points`).
  static DiscreteMeasure empirical(const Eigen::MatrixXd& points);

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  int dim() const { return static_cast<int>(atoms_.front().beta.size()); }
  const Atom& atom(std::size_t j) const { return atoms_[j]; }

  Eigen::VectorXd weights() const;
  /// Atom locations as a size x dim matrix.
  Eigen::MatrixXd support() const;

 private:
  std::vector<Atom> atoms_;
};

}  // namespace regmix
