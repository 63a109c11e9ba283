#include "regmix/pipeline.hpp"

#include <iostream>
#include <random>

#include "regmix/bandwidth.hpp"
#include "regmix/em_npkmle.hpp"
#include "regmix/em_npmle.hpp"
#include "regmix/postprocess.hpp"
#include "regmix/rng.hpp"

namespace regmix {

namespace {
double default_scale(const PipelineOptions& o) {
  if (o.bandwidth_scale > 0.0) return o.bandwidth_scale;
  if (o.method == PipelineOptions::Method::gem) return 1.2;
  if (o.init == PipelineOptions::Init::uniform) return 1.15;
  return 1.0;
}
}  // namespace

PipelineResult run_pipeline(const Dataset& data, const PipelineOptions& o) {
  const int d = data.dim();
  PipelineResult out;

  if (o.method == PipelineOptions::Method::npmle ||
      o.method == PipelineOptions::Method::npmle_meanshift) {
    const QuadratureGrid grid = QuadratureGrid::cube(d, o.box_lo, o.box_hi, o.grid_nodes);
    NpmleOptions opts;
    opts.l2_tol = o.l2_tol;
    if (o.max_iter >= 0) opts.max_iter = o.max_iter;
    out.report = run_em_npmle(data, GridDensity::uniform(grid), opts);
    const double edge = out.report.grid->boundary_mass();
    if (edge > 0.01 && !o.quiet)
      std::cerr << "warning: " << edge * 100.0
                << "% of the estimated mass sits in boundary cells; widen the box\n";
    if (o.method == PipelineOptions::Method::npmle) return out;

    // mean-shift aggregation of a sample from the fitted density
    const std::int64_t m = o.particles > 0 ? o.particles : data.n();
    const KernelProfile profile = gaussian_profile(d);
    const Eigen::MatrixXd sample =
        sample_from_grid_density(*out.report.grid, m, derive_seed(o.seed, "postprocess"));
    double h = o.bandwidth;
    if (!(h > 0.0))
      h = (o.bandwidth_scale > 0.0 ? o.bandwidth_scale : 1.0) *
          oversmooth_bandwidth(m, d, scale_estimate_U(sample), profile);
    out.bandwidth = h;
    out.measure = measure_from_modes(mean_shift(sample, h, profile));
    out.report.atoms = out.measure;
    return out;
  }

  const KernelProfile profile = gaussian_profile(d);
  const std::int64_t np = o.particles > 0 ? o.particles : data.n();
  Eigen::MatrixXd beta0(np, d);
  if (o.init == PipelineOptions::Init::uniform) {
    auto rng = make_rng(o.seed, "init-uniform");
    std::uniform_real_distribution<double> u(o.box_lo, o.box_hi);
    for (Eigen::Index l = 0; l < np; ++l)
      for (int k = 0; k < d; ++k) beta0(l, k) = u(rng);
  } else {
    const QuadratureGrid grid = QuadratureGrid::cube(d, o.box_lo, o.box_hi, o.grid_nodes);
    NpmleOptions opts;
    opts.l2_tol = o.l2_tol;
    const FitReport density_fit = run_em_npmle(data, GridDensity::uniform(grid), opts);
    beta0 =
        sample_from_grid_density(*density_fit.grid, np, derive_seed(o.seed, "init-sample"));
  }

  double h = o.bandwidth;
  if (!(h > 0.0)) {
    h = default_scale(o) * oversmooth_bandwidth(np, d, scale_estimate_U(beta0), profile);
    // grid quadrature cannot resolve kernels narrower than the cell size
    const double step = (o.box_hi - o.box_lo) / o.grid_nodes;
    if (d <= 2 && h < 2.0 * step) {
      if (!o.quiet)
        std::cerr << "warning: oversmoothing bandwidth " << h
                  << " is below the grid resolution; raising it to " << 2.0 * step << "\n";
      h = 2.0 * step;
    }
  }
  out.bandwidth = h;

  NpkmleConfig cfg;
  cfg.mode = o.method == PipelineOptions::Method::gem ? NpkmleConfig::Mode::gem
                                                      : NpkmleConfig::Mode::full_em;
  cfg.inner_tol = o.inner_tol;
  cfg.outer_tol = o.outer_tol;
  cfg.displacement_tol = o.disp_tol;
  cfg.max_inner = o.max_inner;
  if (o.max_iter >= 0) cfg.max_outer = o.max_iter;
  if (o.merge_radius > 0.0) cfg.merge_radius_factor = o.merge_radius / h;
  cfg.policy = d <= 2 ? IntegrationPolicy::grid_box(d, o.box_lo, o.box_hi, o.grid_nodes)
                      : IntegrationPolicy::monte_carlo(d, o.box_lo, o.box_hi, 8192,
                                                       derive_seed(o.seed, "mc"));
  out.report = run_em_npkmle(data, std::move(beta0), h, profile, cfg);
  out.measure = out.report.atoms;
  return out;
}

CvFitter make_cv_fitter(const CvFitterOptions& o) {
  return [o](const Dataset& train, double sigma) {
    const Dataset data = train.with_sigma(sigma);
    const int d = data.dim();
    const KernelProfile profile = gaussian_profile(d);
    const QuadratureGrid grid = QuadratureGrid::cube(d, o.box_lo, o.box_hi, o.grid_nodes);
    NpmleOptions nopts;
    nopts.max_iter = o.npmle_max_iter;
    const FitReport density_fit = run_em_npmle(data, GridDensity::uniform(grid), nopts);
    const Eigen::MatrixXd beta0 =
        sample_from_grid_density(*density_fit.grid, data.n(), derive_seed(o.seed, "cv-init"));
    const double h = oversmooth_bandwidth(data.n(), d, scale_estimate_U(beta0), profile);
    NpkmleConfig cfg;
    cfg.mode = NpkmleConfig::Mode::gem;
    cfg.max_outer = o.gem_max_outer;
    cfg.policy = d <= 2
                     ? IntegrationPolicy::grid_box(d, o.box_lo, o.box_hi, o.grid_nodes)
                     : IntegrationPolicy::monte_carlo(d, o.box_lo, o.box_hi, 4096,
                                                      derive_seed(o.seed, "cv-mc"));
    const FitReport fit = run_em_npkmle(data, beta0, 1.2 * h, profile, cfg);
    return DiscreteMeasure::empirical(fit.kde->points);
  };
}

}  // namespace regmix
