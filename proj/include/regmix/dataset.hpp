#pragma once

#include <Eigen/Dense>
#include <optional>

namespace regmix {

/// Observed regression data: covariate rows x_i, responses y_i, and the noise
/// scale sigma when known. Immutable after construction.
class Dataset {
 public:
  Dataset(Eigen::MatrixXd xs, Eigen::VectorXd ys,
          std::optional<double> sigma = std::nullopt);

  Eigen::Index n() const { return xs_.rows(); }
  int dim() const { return static_cast<int>(xs_.cols()); }
  const Eigen::MatrixXd& xs() const { return xs_; }
  const Eigen::VectorXd& ys() const { return ys_; }
  Eigen::VectorXd x(Eigen::Index i) const { return xs_.row(i); }
  double y(Eigen::Index i) const { return ys_[i]; }

  bool has_sigma() const { return sigma_.has_value(); }
  /// Throws if sigma is unknown; estimate it with cv_sigma first.
  double sigma() const;
  Dataset with_sigma(double sigma) const { return Dataset(xs_, ys_, sigma); }
  /// Rows given by indices, in order.
  Dataset subset(const std::vector<Eigen::Index>& rows) const;

 private:
  Eigen::MatrixXd xs_;
  Eigen::VectorXd ys_;
  std::optional<double> sigma_;
};

}  // namespace regmix
