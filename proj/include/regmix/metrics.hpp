#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "regmix/discrete_measure.hpp"

namespace regmix {

/// Hubert-Arabie adjusted Rand index between two labelings of the same items.
/// Degenerate case (both partitions a single block) returns 1.
double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b);

/// Wasserstein-2 distance between discrete measures: the exact K x K'
/// transportation problem with squared Euclidean cost, solved by network
/// simplex on the bipartite transport polytope; returns sqrt(optimal cost).
double wasserstein2(const DiscreteMeasure& p, const DiscreteMeasure& q);

/// Exact minimum transportation cost for arbitrary cost matrix and marginals
/// (sums must agree within 1e-9).
double transport_min_cost(const Eigen::MatrixXd& cost, const Eigen::VectorXd& supply,
                          const Eigen::VectorXd& demand);

/// One fitted replication of a simulation experiment.
struct ReplicationRecord {
  double ari = 0.0;         // labels from the fitted measure vs truth
  double ari_oracle = 0.0;  // labels from the true measure vs truth
  std::optional<DiscreteMeasure> estimate;
  double w2 = 0.0;
  double wall_seconds = 0.0;
  bool failed = false;
};

struct ComponentBias {
  Eigen::VectorXd beta_bias, beta_sd;  // per coordinate
  double pi_bias = 0.0, pi_sd = 0.0;
};

/// Aggregate of an experiment: means with standard deviations in parentheses,
/// the proportion of runs finding the true component count, and per-component
/// bias rows computed over the runs with the correct count (estimated atoms
/// matched to true atoms by globally optimal nearest assignment).
struct ExperimentSummary {
  int runs = 0;
  int failures = 0;
  double ari_mean = 0.0, ari_sd = 0.0;
  double ari_oracle_mean = 0.0, ari_oracle_sd = 0.0;
  double prop_true_components = 0.0;
  double w2_mean = 0.0, w2_sd = 0.0;
  double wall_mean = 0.0;
  std::vector<ComponentBias> bias;  // one row per true component

  std::string to_text() const;
  std::string to_csv() const;
};

ExperimentSummary experiment_summary(const std::vector<ReplicationRecord>& runs,
                                     const DiscreteMeasure& truth);

/// Matches estimated atoms to true atoms minimizing total squared distance
/// (exhaustive for K <= 8, greedy refinement above). Returns est index per
/// true atom; requires equal sizes.
std::vector<int> match_atoms(const DiscreteMeasure& truth, const DiscreteMeasure& est);

}  // namespace regmix
