#pragma once

#include <Eigen/Dense>
#include <vector>

#include "regmix/dataset.hpp"
#include "regmix/kernel.hpp"
#include "regmix/quadrature.hpp"

namespace regmix::detail {

/// Integration node set shared by the likelihood and EM engines. Grid nodes
/// carry the cell volume as weight; importance samples carry 1/(m q(node)).
/// Tensor grids keep their per-dimension axes so Gaussian kernels can be
/// evaluated separably.
struct NodeSet {
  Eigen::MatrixXd nodes;        // m x d
  Eigen::VectorXd node_weight;  // m
  bool tensor = false;
  std::vector<Eigen::VectorXd> axes;  // per-dim node coordinates (tensor only)
  std::vector<int> shape;             // nodes per dim (tensor only)

  Eigen::Index count() const { return nodes.rows(); }
  int dim() const { return static_cast<int>(nodes.cols()); }

  static NodeSet from_grid(const QuadratureGrid& grid);
  static NodeSet from_samples(Eigen::MatrixXd points, Eigen::VectorXd weights);
};

/// log sum_l v(|node - p_l|^2 / h^2) per node (kernel sum without the
/// 1/(n h^d) normalization). Linear evaluation where it does not underflow,
/// exact log-sum-exp on the nodes where it does.
Eigen::VectorXd log_kernel_sum_field(const Eigen::MatrixXd& points, double h,
                                     const KernelProfile& profile,
                                     const NodeSet& nodes);

/// Per-observation log marginals
///   log sum_node exp(log phi_sigma(y_i - x_i' b_node) + log_meas(node)),
/// max-shifted per row. log_meas already contains the node weights. Throws
/// normalization_error when a row underflows entirely.
Eigen::VectorXd log_marginals(const Dataset& data, const NodeSet& nodes,
                              const Eigen::VectorXd& log_meas);

/// E-step field for the particle EM: responsibilities folded over the data.
struct EStepField {
  NodeSet nodes;
  Eigen::VectorXd log_kernel_t;  // log-kernel sum of the current particles
  Eigen::VectorXd t_field;       // T(node) = sum_i S_i(node) / D_i
  Eigen::VectorXd log_d;         // log D_i = log integral S_i
  double loglik = 0.0;           // incomplete log-likelihood of the KDE
};

EStepField make_estep_field(const Eigen::MatrixXd& particles, const Dataset& data,
                            double h, const KernelProfile& profile, NodeSet nodes);

NodeSet nodes_for_policy(const IntegrationPolicy& policy,
                         const Eigen::MatrixXd& proposal_particles, double h,
                         const KernelProfile& profile, std::uint64_t draw_index);

}  // namespace regmix::detail
