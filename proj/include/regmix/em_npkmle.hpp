#pragma once

#include <Eigen/Dense>

#include "regmix/dataset.hpp"
#include "regmix/detail/fields.hpp"
#include "regmix/discrete_measure.hpp"
#include "regmix/fit_report.hpp"
#include "regmix/kernel.hpp"
#include "regmix/particle_kde.hpp"
#include "regmix/quadrature.hpp"

namespace regmix {

struct NpkmleConfig {
  enum class Mode { full_em, gem };

  /// full_em runs the inner ascent to convergence; gem takes a single
  /// improving step per outer iteration.
  Mode mode = Mode::full_em;
  double inner_tol = 1e-5;  // stop inner loop below this max displacement
  int max_inner = 500;
  double outer_tol = 1e-7;  // relative log-likelihood change, and ...
  double displacement_tol = 1e-4;  // ... max displacement, both required
  int max_outer = 200;
  double merge_radius_factor = 0.05;  // aggregation radius = factor * h
  IntegrationPolicy policy;
};

/// Expected complete-data log-likelihood of the candidate particle set `nu`
/// given current particles `beta_t`. The 1/(n_p h^d) constant inside the log
/// is kept, so values are comparable across calls.
double q_function(const Eigen::MatrixXd& nu, const Eigen::MatrixXd& beta_t,
                  const Dataset& data, double h, const KernelProfile& profile,
                  const IntegrationPolicy& policy);

/// One simultaneous fixed-point update nu_l <- A(nu_l)/C(nu_l); equivalently a
/// gradient-ascent step on Q with the adaptive step size 1/C.
Eigen::MatrixXd inner_step_xi(const Eigen::MatrixXd& nu, const Eigen::MatrixXd& beta_t,
                              const Dataset& data, double h,
                              const KernelProfile& profile,
                              const IntegrationPolicy& policy);

/// Inner loop of one outer EM iteration, starting from beta_t.
Eigen::MatrixXd m_step(const Eigen::MatrixXd& beta_t, const Dataset& data, double h,
                       const KernelProfile& profile, const NpkmleConfig& cfg);

/// Full outer EM over particle sets. Initial particles are typically sampled
/// from a density-EM (run_em_npmle) estimate, or drawn uniformly over the box.
/// The report carries the final ParticleKde plus its aggregated atoms.
FitReport run_em_npkmle(const Dataset& data, Eigen::MatrixXd beta0, double h,
                        const KernelProfile& profile, const NpkmleConfig& cfg);

/// Single-linkage merge of particles closer than merge_radius; each cluster
/// becomes one atom at the cluster mean, weighted by its particle count.
DiscreteMeasure aggregate_atoms(const ParticleKde& kde, double merge_radius);

namespace npkmle_detail {

/// Field-reusing variants for the hot path and the convergence tests.
struct InnerStep {
  Eigen::MatrixXd xi;  // updated particle locations
  Eigen::VectorXd c;   // adaptive step denominators C(nu_l), always > 0
};

InnerStep inner_step(const Eigen::MatrixXd& nu, const detail::EStepField& field,
                     double h, const KernelProfile& profile);

double q_function(const Eigen::MatrixXd& nu, const detail::EStepField& field,
                  const Dataset& data, double h, const KernelProfile& profile,
                  Eigen::Index n_particles);

}  // namespace npkmle_detail

}  // namespace regmix
