#include "regmix/detail/fields.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "regmix/errors.hpp"
#include "regmix/parallel.hpp"
#include "regmix/rng.hpp"

namespace regmix::detail {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr Eigen::Index kObsBlock = 128;
constexpr Eigen::Index kNodeBlock = 8192;

double logsumexp_kernel(const Eigen::MatrixXd& points, double h,
                        const KernelProfile& profile, const Eigen::RowVectorXd& node) {
  const Eigen::ArrayXd t =
      (points.rowwise() - node).rowwise().squaredNorm().array() / (h * h);
  double mx = kNegInf;
  for (Eigen::Index l = 0; l < t.size(); ++l) mx = std::max(mx, profile.log_v(t[l]));
  if (mx == kNegInf) return kNegInf;
  double acc = 0.0;
  for (Eigen::Index l = 0; l < t.size(); ++l) acc += std::exp(profile.log_v(t[l]) - mx);
  return mx + std::log(acc);
}
}  // namespace

NodeSet NodeSet::from_grid(const QuadratureGrid& grid) {
  NodeSet s;
  s.nodes = grid.node_matrix();
  s.node_weight = Eigen::VectorXd::Constant(grid.node_count(), grid.cell_volume());
  s.tensor = true;
  for (int k = 0; k < grid.dim(); ++k) s.axes.push_back(grid.axis(k));
  s.shape = grid.nodes_per_dim();
  return s;
}

NodeSet NodeSet::from_samples(Eigen::MatrixXd points, Eigen::VectorXd weights) {
  if (points.rows() != weights.size() || points.rows() == 0)
    throw std::invalid_argument("NodeSet: bad sample set");
  NodeSet s;
  s.nodes = std::move(points);
  s.node_weight = std::move(weights);
  return s;
}

Eigen::VectorXd log_kernel_sum_field(const Eigen::MatrixXd& points, double h,
                                     const KernelProfile& profile,
                                     const NodeSet& nodes) {
  const Eigen::Index m = nodes.count();
  const Eigen::Index np = points.rows();
  const double inv2h2 = 1.0 / (2.0 * h * h);
  Eigen::VectorXd out(m);

  if (nodes.tensor && profile.is_gaussian() && nodes.dim() <= 2) {
    // Separable: exp(-|node - p|^2/(2h^2)) factorizes over dimensions, so the
    // unnormalized kernel sum over all nodes is one small GEMM.
    const Eigen::VectorXd& ax0 = nodes.axes[0];
    Eigen::MatrixXd a0(np, ax0.size());
    for (Eigen::Index l = 0; l < np; ++l)
      a0.row(l) = (-(ax0.array() - points(l, 0)).square() * inv2h2).exp();
    Eigen::VectorXd linear(m);
    if (nodes.dim() == 1) {
      linear = a0.colwise().sum().transpose();
    } else {
      const Eigen::VectorXd& ax1 = nodes.axes[1];
      Eigen::MatrixXd a1(np, ax1.size());
      for (Eigen::Index l = 0; l < np; ++l)
        a1.row(l) = (-(ax1.array() - points(l, 1)).square() * inv2h2).exp();
      const Eigen::MatrixXd field = a0.transpose() * a1;  // r0 x r1
      const Eigen::Index r1 = field.cols();
      for (Eigen::Index i0 = 0; i0 < field.rows(); ++i0)  // dim 0 slowest
        for (Eigen::Index i1 = 0; i1 < r1; ++i1) linear[i0 * r1 + i1] = field(i0, i1);
    }
    const double log_norm = profile.log_v(0.0);  // v(t) = v(0) exp(-t/2)
    for (Eigen::Index s = 0; s < m; ++s) {
      out[s] = linear[s] > 0.0
                   ? std::log(linear[s]) + log_norm
                   : logsumexp_kernel(points, h, profile, nodes.nodes.row(s));
    }
    return out;
  }

  // Generic path: blockwise squared distances, per-node max shift.
  const Eigen::VectorXd p_sq = points.rowwise().squaredNorm();
  const std::int64_t blocks = (m + kNodeBlock - 1) / kNodeBlock;
  parallel_chunks(blocks, [&](int, std::int64_t b0, std::int64_t b1) {
    for (std::int64_t b = b0; b < b1; ++b) {
      const Eigen::Index s0 = b * kNodeBlock;
      const Eigen::Index bs = std::min<Eigen::Index>(kNodeBlock, m - s0);
      const auto nb = nodes.nodes.middleRows(s0, bs);
      Eigen::MatrixXd d2 = -2.0 * nb * points.transpose();
      d2.colwise() += nb.rowwise().squaredNorm();
      d2.rowwise() += p_sq.transpose();
      const double h2 = h * h;
      for (Eigen::Index r = 0; r < bs; ++r) {
        double mx = kNegInf;
        for (Eigen::Index l = 0; l < np; ++l)
          mx = std::max(mx, profile.log_v(std::max(0.0, d2(r, l)) / h2));
        if (mx == kNegInf) {
          out[s0 + r] = kNegInf;
          continue;
        }
        double acc = 0.0;
        for (Eigen::Index l = 0; l < np; ++l)
          acc += std::exp(profile.log_v(std::max(0.0, d2(r, l)) / h2) - mx);
        out[s0 + r] = mx + std::log(acc);
      }
    }
  });
  return out;
}

Eigen::VectorXd log_marginals(const Dataset& data, const NodeSet& nodes,
                              const Eigen::VectorXd& log_meas) {
  const Eigen::Index n = data.n();
  const Eigen::Index m = nodes.count();
  const double sigma = data.sigma();
  const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
  const double log_norm = -std::log(sigma) - 0.5 * std::log(2.0 * M_PI);
  Eigen::VectorXd out(n);

  const std::int64_t blocks = (n + kObsBlock - 1) / kObsBlock;
  parallel_chunks(blocks, [&](int, std::int64_t b0, std::int64_t b1) {
    for (std::int64_t b = b0; b < b1; ++b) {
      const Eigen::Index i0 = b * kObsBlock;
      const Eigen::Index bs = std::min<Eigen::Index>(kObsBlock, n - i0);
      Eigen::MatrixXd r = data.xs().middleRows(i0, bs) * nodes.nodes.transpose();
      r.colwise() -= data.ys().segment(i0, bs);
      Eigen::ArrayXXd lp = -r.array().square() * inv2s2 + log_norm;
      lp.rowwise() += log_meas.transpose().array();
      for (Eigen::Index k = 0; k < bs; ++k) {
        const Eigen::ArrayXd row = lp.row(k).transpose();
        const double mx = row.maxCoeff();
        if (!std::isfinite(mx))
          throw normalization_error(
              i0 + k, "likelihood underflow: observation " + std::to_string(i0 + k) +
                          " carries no mass on the integration nodes");
        out[i0 + k] = mx + std::log((row - mx).exp().sum());
      }
    }
  });
  return out;
}

EStepField make_estep_field(const Eigen::MatrixXd& particles, const Dataset& data,
                            double h, const KernelProfile& profile, NodeSet nodes) {
  EStepField f;
  f.log_kernel_t = log_kernel_sum_field(particles, h, profile, nodes);
  const Eigen::Index n = data.n();
  const Eigen::Index m = nodes.count();
  const double sigma = data.sigma();
  const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
  const double log_norm = -std::log(sigma) - 0.5 * std::log(2.0 * M_PI);
  const Eigen::ArrayXd log_w = nodes.node_weight.array().log();
  const Eigen::ArrayXd inv_w = nodes.node_weight.array().inverse();

  f.log_d.resize(n);
  const std::int64_t blocks = (n + kObsBlock - 1) / kObsBlock;
  const int chunks = chunk_count(blocks);
  std::vector<Eigen::VectorXd> t_partial(static_cast<std::size_t>(std::max(1, chunks)),
                                         Eigen::VectorXd::Zero(m));
  parallel_chunks(blocks, [&](int chunk, std::int64_t b0, std::int64_t b1) {
    Eigen::VectorXd& part = t_partial[static_cast<std::size_t>(chunk)];
    for (std::int64_t b = b0; b < b1; ++b) {
      const Eigen::Index i0 = b * kObsBlock;
      const Eigen::Index bs = std::min<Eigen::Index>(kObsBlock, n - i0);
      Eigen::MatrixXd r = data.xs().middleRows(i0, bs) * nodes.nodes.transpose();
      r.colwise() -= data.ys().segment(i0, bs);
      Eigen::ArrayXXd lp = -r.array().square() * inv2s2 + log_norm;  // log phi
      lp.rowwise() += f.log_kernel_t.transpose().array();            // log S_i
      for (Eigen::Index k = 0; k < bs; ++k) {
        const Eigen::ArrayXd row = lp.row(k).transpose() + log_w;
        const double mx = row.maxCoeff();
        if (!std::isfinite(mx))
          throw normalization_error(
              i0 + k, "E-step underflow: observation " + std::to_string(i0 + k) +
                          " carries no mass on the integration nodes");
        const Eigen::ArrayXd e = (row - mx).exp();
        const double s = e.sum();
        f.log_d[i0 + k] = mx + std::log(s);
        part.array() += e * inv_w / s;  // T(node) += S_i(node) / D_i
      }
    }
  });
  f.t_field = Eigen::VectorXd::Zero(m);
  for (const auto& tp : t_partial) f.t_field += tp;

  const double log_npkd =
      std::log(static_cast<double>(particles.rows())) + profile.dim() * std::log(h);
  double l = 0.0, comp = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double y = (f.log_d[i] - log_npkd) - comp;
    const double t = l + y;
    comp = (t - l) - y;
    l = t;
  }
  f.loglik = l;
  f.nodes = std::move(nodes);
  return f;
}

NodeSet nodes_for_policy(const IntegrationPolicy& policy,
                         const Eigen::MatrixXd& proposal_particles, double h,
                         const KernelProfile& profile, std::uint64_t draw_index) {
  if (policy.mode == IntegrationPolicy::Mode::grid)
    return NodeSet::from_grid(policy.grid());

  // Self-normalized importance sampling: draw nodes from the current particle
  // KDE (Gaussian profile => mixture of N(p_l, h^2 I)); node weight 1/(m q).
  const Eigen::Index m = policy.mc_samples;
  const Eigen::Index np = proposal_particles.rows();
  const int d = static_cast<int>(proposal_particles.cols());
  std::mt19937_64 rng(derive_seed(policy.mc_seed, "mc-nodes", draw_index));
  std::uniform_int_distribution<Eigen::Index> pick(0, np - 1);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd pts(m, d);
  for (Eigen::Index s = 0; s < m; ++s) {
    const Eigen::Index l = pick(rng);
    for (int k = 0; k < d; ++k) pts(s, k) = proposal_particles(l, k) + h * gauss(rng);
  }
  NodeSet tmp = NodeSet::from_samples(pts, Eigen::VectorXd::Ones(m));
  const Eigen::VectorXd log_q = log_kernel_sum_field(proposal_particles, h, profile, tmp);
  const double log_npkd = std::log(static_cast<double>(np)) + d * std::log(h);
  Eigen::VectorXd w(m);
  for (Eigen::Index s = 0; s < m; ++s)
    w[s] = std::exp(log_npkd - log_q[s] - std::log(static_cast<double>(m)));
  return NodeSet::from_samples(std::move(pts), std::move(w));
}

}  // namespace regmix::detail
