#pragma once

#include <cstdint>
#include <optional>

#include "regmix/cv_sigma.hpp"
#include "regmix/dataset.hpp"
#include "regmix/fit_report.hpp"

namespace regmix {

/// End-to-end fitting recipes: density EM, particle EM (full or single-step
/// inner loop) with density-EM or uniform initialization and the oversmoothing
/// bandwidth, and density EM followed by mean-shift aggregation.
struct PipelineOptions {
  enum class Method { npmle, npkmle, gem, npmle_meanshift };
  enum class Init { npmle, uniform };

  Method method = Method::npkmle;
  Init init = Init::npmle;
  double box_lo = -4.0, box_hi = 4.0;
  int grid_nodes = 161;
  double bandwidth = 0.0;        // 0 = oversmoothing rule
  double bandwidth_scale = 0.0;  // 0 = default for the method/init pair
  double merge_radius = 0.0;     // 0 = 0.05 * bandwidth
  std::int64_t particles = 0;    // 0 = n
  int max_iter = -1;             // -1 = library defaults
  double l2_tol = 1e-5;
  double inner_tol = 1e-5, outer_tol = 1e-7, disp_tol = 1e-4;
  int max_inner = 500;
  std::uint64_t seed = 0;
  bool quiet = false;  // suppress stderr warnings
};

struct PipelineResult {
  FitReport report;
  std::optional<DiscreteMeasure> measure;  // discrete estimator when available
  double bandwidth = 0.0;
};

PipelineResult run_pipeline(const Dataset& data, const PipelineOptions& opts);

/// Fold fitter for cv_sigma following the same recipe at reduced cost:
/// density-EM initialization, single-step inner loop, empirical particle
/// distribution as the held-out scorer.
struct CvFitterOptions {
  double box_lo = -4.0, box_hi = 4.0;
  int grid_nodes = 81;
  int npmle_max_iter = 200;
  int gem_max_outer = 60;
  std::uint64_t seed = 0;
};

CvFitter make_cv_fitter(const CvFitterOptions& opts);

}  // namespace regmix
