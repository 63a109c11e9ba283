#include "regmix/particle_kde.hpp"

#include <cmath>
#include <limits>

namespace regmix {

double ParticleKde::log_density(const Eigen::VectorXd& query) const {
  const double h2 = bandwidth * bandwidth;
  const Eigen::ArrayXd t =
      (points.rowwise() - query.transpose()).rowwise().squaredNorm().array() / h2;
  // log-sum-exp over particles of log v(t_l)
  double mx = -std::numeric_limits<double>::infinity();
  for (Eigen::Index l = 0; l < t.size(); ++l) mx = std::max(mx, profile.log_v(t[l]));
  if (!std::isfinite(mx)) return -std::numeric_limits<double>::infinity();
  double s = 0.0;
  for (Eigen::Index l = 0; l < t.size(); ++l) s += std::exp(profile.log_v(t[l]) - mx);
  return mx + std::log(s) - std::log(static_cast<double>(points.rows())) -
         dim() * std::log(bandwidth);
}

}  // namespace regmix
