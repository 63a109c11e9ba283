#include "regmix/likelihood.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "regmix/detail/fields.hpp"
#include "regmix/errors.hpp"

namespace regmix {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double kahan_sum(const Eigen::VectorXd& v) {
  double s = 0.0, comp = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double y = v[i] - comp;
    const double t = s + y;
    comp = (t - s) - y;
    s = t;
  }
  return s;
}
}  // namespace

double gaussian_density(double r, double sigma) {
  return std::exp(log_gaussian_density(r, sigma));
}

double log_gaussian_density(double r, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_density: sigma must be > 0");
  if (!std::isfinite(r)) throw std::invalid_argument("gaussian_density: r must be finite");
  static const double kLogSqrt2Pi = 0.5 * std::log(2.0 * M_PI);
  return -0.5 * (r / sigma) * (r / sigma) - std::log(sigma) - kLogSqrt2Pi;
}

double incomplete_loglik(const DiscreteMeasure& g, const Dataset& data) {
  const double sigma = data.sigma();
  const Eigen::Index n = data.n();
  Eigen::VectorXd per_obs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double mx = kNegInf;
    Eigen::VectorXd terms(static_cast<Eigen::Index>(g.size()));
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double r = data.y(i) - data.x(i).dot(g.atom(j).beta);
      terms[static_cast<Eigen::Index>(j)] =
          std::log(g.atom(j).weight) + log_gaussian_density(r, sigma);
      mx = std::max(mx, terms[static_cast<Eigen::Index>(j)]);
    }
    if (!std::isfinite(mx))
      throw normalization_error(i, "incomplete_loglik: observation " + std::to_string(i) +
                                       " has zero mixture density");
    per_obs[i] = mx + std::log((terms.array() - mx).exp().sum());
  }
  return kahan_sum(per_obs);
}

double incomplete_loglik(const GridDensity& g, const Dataset& data) {
  detail::NodeSet nodes = detail::NodeSet::from_grid(g.grid());
  const Eigen::VectorXd log_meas =
      g.values().array().log() + std::log(g.grid().cell_volume());
  return kahan_sum(detail::log_marginals(data, nodes, log_meas));
}

double incomplete_loglik(const ParticleKde& g, const Dataset& data,
                         const IntegrationPolicy& policy) {
  detail::NodeSet nodes = detail::nodes_for_policy(policy, g.points, g.bandwidth,
                                                   g.profile, /*draw_index=*/0);
  Eigen::VectorXd log_meas =
      detail::log_kernel_sum_field(g.points, g.bandwidth, g.profile, nodes);
  const double log_npkd = std::log(static_cast<double>(g.particle_count())) +
                          g.dim() * std::log(g.bandwidth);
  log_meas.array() += nodes.node_weight.array().log() - log_npkd;
  return kahan_sum(detail::log_marginals(data, nodes, log_meas));
}

double incomplete_loglik(const ParticleKde& g, const Dataset& data) {
  return incomplete_loglik(g, data, IntegrationPolicy::default_for(g.dim()));
}

std::vector<int> posterior_cluster_assign(const DiscreteMeasure& g, const Dataset& data) {
  const double sigma = data.sigma();
  const Eigen::Index n = data.n();
  std::vector<int> labels(static_cast<std::size_t>(n));
  // The shared denominator is constant in j, so the argmax needs only the
  // per-component log weights.
  for (Eigen::Index i = 0; i < n; ++i) {
    int best = 0;
    double best_score = kNegInf;
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double r = data.y(i) - data.x(i).dot(g.atom(j).beta);
      const double score = std::log(g.atom(j).weight) + log_gaussian_density(r, sigma);
      if (score > best_score) {  // strict: ties keep the lowest index
        best_score = score;
        best = static_cast<int>(j);
      }
    }
    labels[static_cast<std::size_t>(i)] = best;
  }
  return labels;
}

}  // namespace regmix
