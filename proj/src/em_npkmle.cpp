#include "regmix/em_npkmle.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "regmix/errors.hpp"
#include "regmix/parallel.hpp"

namespace regmix {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr Eigen::Index kNodeBlock = 8192;

using detail::EStepField;
using detail::NodeSet;

// log of the kernel sum at one node for the current nu (underflow fallback).
double node_log_kernel(const Eigen::MatrixXd& nu, double h, const KernelProfile& prof,
                       const Eigen::RowVectorXd& node) {
  const Eigen::ArrayXd t = (nu.rowwise() - node).rowwise().squaredNorm().array() / (h * h);
  double mx = kNegInf;
  for (Eigen::Index l = 0; l < t.size(); ++l) mx = std::max(mx, prof.log_v(t[l]));
  double acc = 0.0;
  for (Eigen::Index l = 0; l < t.size(); ++l) acc += std::exp(prof.log_v(t[l]) - mx);
  return mx + std::log(acc);
}

// Exact per-particle update in shifted log space; used when the linear
// accumulation of A and C underflowed for a particle far from all field mass.
void fallback_particle(Eigen::Index l, const Eigen::MatrixXd& nu, double h,
                       const KernelProfile& prof, const EStepField& field,
                       const Eigen::VectorXd& log_k_field, Eigen::MatrixXd& a_num,
                       Eigen::VectorXd& c_den) {
  const Eigen::Index m = field.nodes.count();
  const int d = static_cast<int>(nu.cols());
  const double h2 = h * h;
  Eigen::ArrayXd le(m);
  double mx = kNegInf;
  for (Eigen::Index s = 0; s < m; ++s) {
    if (!(field.t_field[s] > 0.0)) {
      le[s] = kNegInf;
      continue;
    }
    const double t = (nu.row(l) - field.nodes.nodes.row(s)).squaredNorm() / h2;
    le[s] = prof.log_w(t) - log_k_field[s] + std::log(field.t_field[s]) +
            std::log(field.nodes.node_weight[s]);
    mx = std::max(mx, le[s]);
  }
  if (mx == kNegInf) return;  // no usable mass anywhere; leave zeros
  double c = 0.0;
  Eigen::VectorXd a = Eigen::VectorXd::Zero(d);
  for (Eigen::Index s = 0; s < m; ++s) {
    if (le[s] == kNegInf) continue;
    const double e = std::exp(le[s] - mx);
    c += e;
    a += e * field.nodes.nodes.row(s).transpose();
  }
  const double scale = std::exp(mx);  // may underflow; the ratio A/C stays exact
  c_den[l] = c * scale;
  a_num.row(l) = (a / c).transpose();  // store the ratio directly
  if (scale == 0.0 || c_den[l] == 0.0) c_den[l] = std::numeric_limits<double>::min();
}

}  // namespace

namespace npkmle_detail {

InnerStep inner_step(const Eigen::MatrixXd& nu, const EStepField& field, double h,
                     const KernelProfile& profile) {
  const Eigen::Index np = nu.rows();
  const int d = static_cast<int>(nu.cols());
  const Eigen::Index m = field.nodes.count();
  const double inv2h2 = 1.0 / (2.0 * h * h);

  // Linear kernel sums K(node) = sum_m v_h(|node - nu_m|^2), computed without
  // the profile normalization (it cancels between numerator and denominator of
  // the field weight W = T * node_weight / K, once C carries the w = v/2
  // factor relative to the same unnormalized kernel values).
  Eigen::VectorXd k_linear(m);
  Eigen::MatrixXd a_num = Eigen::MatrixXd::Zero(np, d);
  Eigen::VectorXd c_den = Eigen::VectorXd::Zero(np);
  std::vector<Eigen::Index> underflow_nodes;

  const bool tensor_fast = field.nodes.tensor && profile.is_gaussian() && d <= 2;
  if (tensor_fast) {
    const Eigen::VectorXd& ax0 = field.nodes.axes[0];
    Eigen::MatrixXd a0(np, ax0.size());
    parallel_chunks(np, [&](int, std::int64_t l0, std::int64_t l1) {
      for (std::int64_t l = l0; l < l1; ++l)
        a0.row(l) = (-(ax0.array() - nu(l, 0)).square() * inv2h2).exp();
    });
    if (d == 1) {
      k_linear = a0.colwise().sum().transpose();
      Eigen::VectorXd w_field(m);
      for (Eigen::Index s = 0; s < m; ++s) {
        if (!(field.t_field[s] > 0.0)) {
          w_field[s] = 0.0;
        } else if (k_linear[s] > 0.0) {
          w_field[s] = field.t_field[s] * field.nodes.node_weight[s] / k_linear[s];
        } else {
          w_field[s] = 0.0;
          underflow_nodes.push_back(s);
        }
      }
      c_den = 0.5 * (a0 * w_field);
      a_num.col(0) = 0.5 * (a0 * w_field.cwiseProduct(ax0));
    } else {
      const Eigen::VectorXd& ax1 = field.nodes.axes[1];
      const Eigen::Index r0 = ax0.size(), r1 = ax1.size();
      Eigen::MatrixXd a1(np, r1);
      parallel_chunks(np, [&](int, std::int64_t l0, std::int64_t l1) {
        for (std::int64_t l = l0; l < l1; ++l)
          a1.row(l) = (-(ax1.array() - nu(l, 1)).square() * inv2h2).exp();
      });
      Eigen::MatrixXd k_field = a0.transpose() * a1;  // r0 x r1
      Eigen::MatrixXd w_field(r0, r1);
      for (Eigen::Index i0 = 0; i0 < r0; ++i0) {
        for (Eigen::Index i1 = 0; i1 < r1; ++i1) {
          const Eigen::Index s = i0 * r1 + i1;
          k_linear[s] = k_field(i0, i1);
          if (!(field.t_field[s] > 0.0)) {
            w_field(i0, i1) = 0.0;
          } else if (k_linear[s] > 0.0) {
            w_field(i0, i1) =
                field.t_field[s] * field.nodes.node_weight[s] / k_linear[s];
          } else {
            w_field(i0, i1) = 0.0;
            underflow_nodes.push_back(s);
          }
        }
      }
      // C_l  = 1/2 sum_{jk} a0[l,j] W[j,k] a1[l,k]
      // A0_l = 1/2 sum_{jk} a0[l,j] x0[j] W[j,k] a1[l,k]
      // A1_l = 1/2 sum_{jk} a0[l,j] W[j,k] x1[k] a1[l,k]
      Eigen::MatrixXd mw = a0 * w_field;                                   // np x r1
      Eigen::MatrixXd mw0 = (a0.array().rowwise() * ax0.transpose().array()).matrix() * w_field;
      c_den = 0.5 * (mw.array() * a1.array()).rowwise().sum();
      a_num.col(0) = 0.5 * (mw0.array() * a1.array()).rowwise().sum();
      a_num.col(1) =
          0.5 * (mw.array() * a1.array()).matrix() * ax1;
    }
  } else {
    // Generic path: blockwise squared distances against the node set.
    const Eigen::VectorXd nu_sq = nu.rowwise().squaredNorm();
    const std::int64_t blocks = (m + kNodeBlock - 1) / kNodeBlock;
    const int chunks = chunk_count(blocks);
    std::vector<Eigen::MatrixXd> a_part(static_cast<std::size_t>(std::max(1, chunks)));
    std::vector<Eigen::VectorXd> c_part(static_cast<std::size_t>(std::max(1, chunks)));
    std::vector<std::vector<Eigen::Index>> uf_part(
        static_cast<std::size_t>(std::max(1, chunks)));
    parallel_chunks(blocks, [&](int chunk, std::int64_t b0, std::int64_t b1) {
      Eigen::MatrixXd a_loc = Eigen::MatrixXd::Zero(np, d);
      Eigen::VectorXd c_loc = Eigen::VectorXd::Zero(np);
      for (std::int64_t b = b0; b < b1; ++b) {
        const Eigen::Index s0 = b * kNodeBlock;
        const Eigen::Index bs = std::min<Eigen::Index>(kNodeBlock, m - s0);
        const auto nb = field.nodes.nodes.middleRows(s0, bs);
        Eigen::MatrixXd d2 = -2.0 * nu * nb.transpose();  // np x bs
        d2.colwise() += nu_sq;
        d2.rowwise() += nb.rowwise().squaredNorm().transpose();
        Eigen::MatrixXd v = (-d2.array().max(0.0) * inv2h2).exp();
        Eigen::VectorXd w_blk(bs);
        for (Eigen::Index j = 0; j < bs; ++j) {
          const Eigen::Index s = s0 + j;
          k_linear[s] = v.col(j).sum();
          if (!(field.t_field[s] > 0.0)) {
            w_blk[j] = 0.0;
          } else if (k_linear[s] > 0.0) {
            w_blk[j] = field.t_field[s] * field.nodes.node_weight[s] / k_linear[s];
          } else {
            w_blk[j] = 0.0;
            uf_part[static_cast<std::size_t>(chunk)].push_back(s);
          }
        }
        c_loc.noalias() += 0.5 * (v * w_blk);
        a_loc.noalias() += 0.5 * (v * (nb.array().colwise() * w_blk.array()).matrix());
      }
      a_part[static_cast<std::size_t>(chunk)] = std::move(a_loc);
      c_part[static_cast<std::size_t>(chunk)] = std::move(c_loc);
    });
    for (std::size_t c = 0; c < a_part.size(); ++c) {
      if (a_part[c].size() > 0) {
        a_num += a_part[c];
        c_den += c_part[c];
      }
      underflow_nodes.insert(underflow_nodes.end(), uf_part[c].begin(), uf_part[c].end());
    }
  }

  // Nodes whose kernel sum underflowed but still carry field mass: add their
  // contribution exactly in log space.
  Eigen::VectorXd log_k_field;
  for (Eigen::Index s : underflow_nodes) {
    const double log_k = node_log_kernel(nu, h, profile, field.nodes.nodes.row(s));
    const double tw = field.t_field[s] * field.nodes.node_weight[s];
    const double h2 = h * h;
    for (Eigen::Index l = 0; l < np; ++l) {
      const double t = (nu.row(l) - field.nodes.nodes.row(s)).squaredNorm() / h2;
      const double ratio = std::exp(profile.log_w(t) - log_k);  // <= 1/2
      c_den[l] += ratio * tw;
      a_num.row(l) += ratio * tw * field.nodes.nodes.row(s);
    }
  }

  InnerStep out;
  out.xi.resize(np, d);
  out.c = c_den;
  bool need_log_k = false;
  for (Eigen::Index l = 0; l < np; ++l) {
    if (c_den[l] > 0.0 && std::isfinite(c_den[l])) {
      out.xi.row(l) = a_num.row(l) / c_den[l];
    } else {
      need_log_k = true;
    }
  }
  if (need_log_k) {
    // Particles so far from the field mass that A and C underflowed: recover
    // the ratio A/C with a per-particle shift.
    log_k_field.resize(m);
    for (Eigen::Index s = 0; s < m; ++s)
      log_k_field[s] = k_linear[s] > 0.0
                           ? std::log(k_linear[s]) + profile.log_v(0.0)
                           : node_log_kernel(nu, h, profile, field.nodes.nodes.row(s));
    for (Eigen::Index l = 0; l < np; ++l) {
      if (c_den[l] > 0.0 && std::isfinite(c_den[l])) continue;
      fallback_particle(l, nu, h, profile, field, log_k_field, a_num, out.c);
      out.xi.row(l) = a_num.row(l);  // fallback stored the ratio
      if (!(out.c[l] > 0.0)) {
        // no field mass at all: keep the particle in place
        out.xi.row(l) = nu.row(l);
        out.c[l] = std::numeric_limits<double>::min();
      }
    }
  }
  return out;
}

double q_function(const Eigen::MatrixXd& nu, const EStepField& field,
                  const Dataset& data, double h, const KernelProfile& profile,
                  Eigen::Index n_particles) {
  const Eigen::Index m = field.nodes.count();
  const Eigen::Index n = data.n();
  const int d = static_cast<int>(nu.cols());
  const double log_npkd = std::log(static_cast<double>(n_particles)) + d * std::log(h);

  const Eigen::VectorXd log_kde_nu =
      detail::log_kernel_sum_field(nu, h, profile, field.nodes);

  // Kernel part: integrates against the pooled responsibility field T.
  double q_kernel = 0.0;
  for (Eigen::Index s = 0; s < m; ++s) {
    if (!(field.t_field[s] > 0.0)) continue;  // no mass, no contribution
    if (log_kde_nu[s] == kNegInf) return kNegInf;
    q_kernel +=
        (log_kde_nu[s] - log_npkd) * field.t_field[s] * field.nodes.node_weight[s];
  }

  // Gaussian part: sum_i E_i[log phi_i] under the posterior responsibilities.
  const double sigma = data.sigma();
  const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
  const double log_norm = -std::log(sigma) - 0.5 * std::log(2.0 * M_PI);
  const Eigen::ArrayXd log_w = field.nodes.node_weight.array().log();
  constexpr Eigen::Index kObsBlock = 128;
  const std::int64_t blocks = (n + kObsBlock - 1) / kObsBlock;
  const int chunks = chunk_count(blocks);
  std::vector<double> part(static_cast<std::size_t>(std::max(1, chunks)), 0.0);
  parallel_chunks(blocks, [&](int chunk, std::int64_t b0, std::int64_t b1) {
    double acc = 0.0;
    for (std::int64_t b = b0; b < b1; ++b) {
      const Eigen::Index i0 = b * kObsBlock;
      const Eigen::Index bs = std::min<Eigen::Index>(kObsBlock, n - i0);
      Eigen::MatrixXd r = data.xs().middleRows(i0, bs) * field.nodes.nodes.transpose();
      r.colwise() -= data.ys().segment(i0, bs);
      Eigen::ArrayXXd lp = -r.array().square() * inv2s2 + log_norm;
      Eigen::ArrayXXd lw = lp;
      lw.rowwise() += (field.log_kernel_t.array() + log_w).transpose();
      lw.colwise() -= field.log_d.segment(i0, bs).array();
      acc += (lp * lw.exp()).sum();
    }
    part[static_cast<std::size_t>(chunk)] = acc;
  });
  double q_phi = 0.0;
  for (double v : part) q_phi += v;
  return q_kernel + q_phi;
}

}  // namespace npkmle_detail

namespace {

double max_displacement(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).rowwise().norm().maxCoeff();
}

Eigen::MatrixXd m_step_with_field(const Eigen::MatrixXd& beta_t, const EStepField& field,
                                  double h, const KernelProfile& profile,
                                  const NpkmleConfig& cfg) {
  Eigen::MatrixXd nu = beta_t;
  for (int r = 0; r < cfg.max_inner; ++r) {
    auto step = npkmle_detail::inner_step(nu, field, h, profile);
    const double disp = max_displacement(step.xi, nu);
    nu = std::move(step.xi);
    if (cfg.mode == NpkmleConfig::Mode::gem) break;  // single improving step
    if (disp < cfg.inner_tol) break;
  }
  return nu;
}

void validate(const NpkmleConfig& cfg) {
  if (!(cfg.inner_tol > 0.0) || !(cfg.outer_tol > 0.0) || !(cfg.displacement_tol > 0.0))
    throw std::invalid_argument("NpkmleConfig: tolerances must be > 0");
  if (cfg.max_inner < 1 || cfg.max_outer < 0)
    throw std::invalid_argument("NpkmleConfig: bad iteration limits");
  if (!(cfg.merge_radius_factor > 0.0))
    throw std::invalid_argument("NpkmleConfig: merge radius factor must be > 0");
  cfg.policy.validate();
}

}  // namespace

double q_function(const Eigen::MatrixXd& nu, const Eigen::MatrixXd& beta_t,
                  const Dataset& data, double h, const KernelProfile& profile,
                  const IntegrationPolicy& policy) {
  if (nu.rows() != beta_t.rows() || nu.cols() != beta_t.cols())
    throw std::invalid_argument("q_function: particle sets must match in shape");
  NodeSet nodes = detail::nodes_for_policy(policy, beta_t, h, profile, 0);
  EStepField field = detail::make_estep_field(beta_t, data, h, profile, std::move(nodes));
  return npkmle_detail::q_function(nu, field, data, h, profile, nu.rows());
}

Eigen::MatrixXd inner_step_xi(const Eigen::MatrixXd& nu, const Eigen::MatrixXd& beta_t,
                              const Dataset& data, double h,
                              const KernelProfile& profile,
                              const IntegrationPolicy& policy) {
  if (nu.rows() != beta_t.rows() || nu.cols() != beta_t.cols())
    throw std::invalid_argument("inner_step_xi: particle sets must match in shape");
  NodeSet nodes = detail::nodes_for_policy(policy, beta_t, h, profile, 0);
  EStepField field = detail::make_estep_field(beta_t, data, h, profile, std::move(nodes));
  return npkmle_detail::inner_step(nu, field, h, profile).xi;
}

Eigen::MatrixXd m_step(const Eigen::MatrixXd& beta_t, const Dataset& data, double h,
                       const KernelProfile& profile, const NpkmleConfig& cfg) {
  validate(cfg);
  NodeSet nodes = detail::nodes_for_policy(cfg.policy, beta_t, h, profile, 0);
  EStepField field = detail::make_estep_field(beta_t, data, h, profile, std::move(nodes));
  return m_step_with_field(beta_t, field, h, profile, cfg);
}

FitReport run_em_npkmle(const Dataset& data, Eigen::MatrixXd beta0, double h,
                        const KernelProfile& profile, const NpkmleConfig& cfg) {
  validate(cfg);
  if (beta0.rows() < 1) throw std::invalid_argument("run_em_npkmle: no initial particles");
  if (!(h > 0.0)) throw std::invalid_argument("run_em_npkmle: bandwidth must be > 0");
  const auto start = std::chrono::steady_clock::now();

  FitReport report;
  Eigen::MatrixXd particles = std::move(beta0);
  double prev_loglik = 0.0;
  double last_disp = std::numeric_limits<double>::infinity();
  int outer = 0;
  for (int t = 0;; ++t) {
    NodeSet nodes = detail::nodes_for_policy(cfg.policy, particles, h, profile,
                                             static_cast<std::uint64_t>(t));
    EStepField field =
        detail::make_estep_field(particles, data, h, profile, std::move(nodes));
    report.loglik_trace.push_back(field.loglik);
    if (t > 0 && std::abs(field.loglik - prev_loglik) <
                     cfg.outer_tol * (1.0 + std::abs(prev_loglik)) &&
        last_disp < cfg.displacement_tol) {
      report.converged = true;
      break;
    }
    if (t >= cfg.max_outer) break;
    prev_loglik = field.loglik;
    Eigen::MatrixXd next = m_step_with_field(particles, field, h, profile, cfg);
    last_disp = max_displacement(next, particles);
    particles = std::move(next);
    outer = t + 1;
  }

  ParticleKde kde(std::move(particles), h, profile);
  report.atoms = aggregate_atoms(kde, cfg.merge_radius_factor * h);
  report.kde = std::move(kde);
  report.iterations = outer;
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

DiscreteMeasure aggregate_atoms(const ParticleKde& kde, double merge_radius) {
  if (!(merge_radius > 0.0))
    throw std::invalid_argument("aggregate_atoms: merge radius must be > 0");
  const Eigen::Index np = kde.particle_count();
  const double r2 = merge_radius * merge_radius;

  std::vector<Eigen::Index> parent(static_cast<std::size_t>(np));
  std::iota(parent.begin(), parent.end(), 0);
  std::function<Eigen::Index(Eigen::Index)> find = [&](Eigen::Index a) {
    while (parent[static_cast<std::size_t>(a)] != a) {
      parent[static_cast<std::size_t>(a)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
      a = parent[static_cast<std::size_t>(a)];
    }
    return a;
  };
  for (Eigen::Index i = 0; i < np; ++i) {
    for (Eigen::Index j = i + 1; j < np; ++j) {
      if ((kde.points.row(i) - kde.points.row(j)).squaredNorm() < r2) {
        const Eigen::Index ri = find(i), rj = find(j);
        if (ri != rj) parent[static_cast<std::size_t>(std::max(ri, rj))] = std::min(ri, rj);
      }
    }
  }
  // clusters keyed by root, ordered by smallest member index
  std::vector<Eigen::Index> roots;
  std::vector<Eigen::VectorXd> sums;
  std::vector<Eigen::Index> counts;
  for (Eigen::Index i = 0; i < np; ++i) {
    const Eigen::Index r = find(i);
    auto it = std::find(roots.begin(), roots.end(), r);
    if (it == roots.end()) {
      roots.push_back(r);
      sums.push_back(kde.points.row(i).transpose());
      counts.push_back(1);
    } else {
      const auto k = static_cast<std::size_t>(it - roots.begin());
      sums[k] += kde.points.row(i).transpose();
      counts[k] += 1;
    }
  }
  std::vector<Atom> atoms;
  atoms.reserve(roots.size());
  for (std::size_t k = 0; k < roots.size(); ++k)
    atoms.push_back({sums[k] / static_cast<double>(counts[k]),
                     static_cast<double>(counts[k]) / static_cast<double>(np)});
  return DiscreteMeasure(std::move(atoms));
}

}  // namespace regmix
