#include "regmix/dataset.hpp"

#include <cmath>
#include <stdexcept>

#include "regmix/discrete_measure.hpp"

namespace regmix {

Dataset::Dataset(Eigen::MatrixXd xs, Eigen::VectorXd ys, std::optional<double> sigma)
    : xs_(std::move(xs)), ys_(std::move(ys)), sigma_(sigma) {
  if (xs_.rows() < 1 || xs_.cols() < 1)
    throw std::invalid_argument("Dataset: need n >= 1 and d >= 1");
  if (ys_.size() != xs_.rows())
    throw std::invalid_argument("Dataset: xs/ys length mismatch");
  if (!xs_.allFinite() || !ys_.allFinite())
    throw std::invalid_argument("Dataset: entries must be finite");
  if (sigma_ && !(*sigma_ > 0.0))
    throw std::invalid_argument("Dataset: sigma must be > 0");
}

double Dataset::sigma() const {
  if (!sigma_)
    throw std::logic_error("Dataset: sigma unknown; estimate it (cv-sigma) or set it");
  return *sigma_;
}

Dataset Dataset::subset(const std::vector<Eigen::Index>& rows) const {
  Eigen::MatrixXd xs(static_cast<Eigen::Index>(rows.size()), dim());
  Eigen::VectorXd ys(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    xs.row(static_cast<Eigen::Index>(k)) = xs_.row(rows[k]);
    ys[static_cast<Eigen::Index>(k)] = ys_[rows[k]];
  }
  return Dataset(std::move(xs), std::move(ys), sigma_);
}

DiscreteMeasure::DiscreteMeasure(std::vector<Atom> atoms) {
  if (atoms.empty()) throw std::invalid_argument("DiscreteMeasure: no atoms");
  const Eigen::Index d = atoms.front().beta.size();
  for (const auto& a : atoms) {
    if (a.beta.size() != d)
      throw std::invalid_argument("DiscreteMeasure: mixed atom dimensions");
    if (!a.beta.allFinite() || !std::isfinite(a.weight))
      throw std::invalid_argument("DiscreteMeasure: non-finite atom");
    if (!(a.weight > 0.0))
      throw std::invalid_argument("DiscreteMeasure: weights must be > 0");
  }
  // Merge exact duplicates so atoms are pairwise distinct.
  for (auto& a : atoms) {
    bool merged = false;
    for (auto& kept : atoms_) {
      if (kept.beta == a.beta) {
        kept.weight += a.weight;
        merged = true;
        break;
      }
    }
    if (!merged) atoms_.push_back(std::move(a));
  }
  double sum = 0.0, comp = 0.0;
  for (const auto& a : atoms_) {
    const double y = a.weight - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("DiscreteMeasure: weights sum to " + std::to_string(sum));
}

DiscreteMeasure DiscreteMeasure::empirical(const Eigen::MatrixXd& points) {
  if (points.rows() < 1) throw std::invalid_argument("empirical: no points");
  std::vector<Atom> atoms;
  atoms.reserve(static_cast<std::size_t>(points.rows()));
  const double w = 1.0 / static_cast<double>(points.rows());
  for (Eigen::Index i = 0; i < points.rows(); ++i)
    atoms.push_back({points.row(i).transpose(), w});
  return DiscreteMeasure(std::move(atoms));
}

Eigen::VectorXd DiscreteMeasure::weights() const {
  Eigen::VectorXd w(static_cast<Eigen::Index>(atoms_.size()));
  for (std::size_t j = 0; j < atoms_.size(); ++j)
    w[static_cast<Eigen::Index>(j)] = atoms_[j].weight;
  return w;
}

Eigen::MatrixXd DiscreteMeasure::support() const {
  Eigen::MatrixXd s(static_cast<Eigen::Index>(atoms_.size()), dim());
  for (std::size_t j = 0; j < atoms_.size(); ++j)
    s.row(static_cast<Eigen::Index>(j)) = atoms_[j].beta.transpose();
  return s;
}

}  // namespace regmix
