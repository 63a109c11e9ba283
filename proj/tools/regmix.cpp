// Command-line driver: simulation, fitting, post-processing, cross-validation,
// replication experiments, and plot-ready exports.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "regmix/bandwidth.hpp"
#include "regmix/csv.hpp"
#include "regmix/cv_sigma.hpp"
#include "regmix/likelihood.hpp"
#include "regmix/metrics.hpp"
#include "regmix/parallel.hpp"
#include "regmix/pipeline.hpp"
#include "regmix/postprocess.hpp"
#include "regmix/rng.hpp"
#include "regmix/simulate.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace regmix;

namespace {

struct IoOptions {
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  int threads = 0;
};

struct DataOptions {
  std::string path;
  std::vector<std::string> x_cols = {"x"};
  std::string y_col = "y";
  bool no_intercept = false;
  double sigma = 0.0;  // 0 = unknown
};

Dataset load_data(const DataOptions& d) {
  return load_csv(d.path, d.x_cols, d.y_col, !d.no_intercept,
                  d.sigma > 0.0 ? std::optional<double>(d.sigma) : std::nullopt);
}

void ensure_dir(const std::string& dir) {
  if (!dir.empty() && dir != ".") fs::create_directories(dir);
}

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

PipelineOptions::Method parse_method(const std::string& m) {
  if (m == "npmle") return PipelineOptions::Method::npmle;
  if (m == "gem") return PipelineOptions::Method::gem;
  if (m == "npmle-ms") return PipelineOptions::Method::npmle_meanshift;
  return PipelineOptions::Method::npkmle;
}

json report_json(const PipelineResult& fit, const std::string& method,
                 const Dataset& data) {
  json j;
  j["method"] = method;
  j["n"] = data.n();
  j["dim"] = data.dim();
  j["sigma"] = data.has_sigma() ? json(data.sigma()) : json();
  j["bandwidth"] = fit.bandwidth > 0.0 ? json(fit.bandwidth) : json();
  j["iterations"] = fit.report.iterations;
  j["converged"] = fit.report.converged;
  j["wall_seconds"] = fit.report.wall_seconds;
  if (!fit.report.loglik_trace.empty()) {
    j["loglik_first"] = fit.report.loglik_trace.front();
    j["loglik_final"] = fit.report.loglik_trace.back();
  }
  if (fit.measure) j["atom_count"] = fit.measure->size();
  return j;
}

void write_fit_outputs(const PipelineResult& fit, const std::string& method,
                       const Dataset& data, const std::string& dir) {
  ensure_dir(dir);
  write_trace_csv(join(dir, "trace.csv"), fit.report.loglik_trace);
  if (fit.report.grid) write_grid_csv(join(dir, "grid.csv"), *fit.report.grid);
  if (fit.report.kde) write_points_csv(join(dir, "particles.csv"), fit.report.kde->points);
  if (fit.measure) {
    write_atoms_csv(join(dir, "atoms.csv"), *fit.measure);
    write_labels_csv(join(dir, "labels.csv"), posterior_cluster_assign(*fit.measure, data));
  }
  std::ofstream(join(dir, "report.json")) << report_json(fit, method, data).dump(2) << "\n";
}

// --- svg plot ---------------------------------------------------------------

std::string svg_color(std::size_t k) {
  static const char* palette[] = {"#1b6ca8", "#c0392b", "#27ae60", "#8e44ad",
                                  "#d35400", "#16a085", "#7f8c8d", "#2c3e50"};
  return palette[k % 8];
}

void write_svg_plot(const std::string& path, const Dataset* data,
                    const DiscreteMeasure* atoms) {
  const double w = 640, h = 480, margin = 48;
  double x_lo = -1, x_hi = 3, y_lo = -3, y_hi = 5;
  if (data && data->dim() >= 2) {
    x_lo = data->xs().col(1).minCoeff();
    x_hi = data->xs().col(1).maxCoeff();
    y_lo = data->ys().minCoeff();
    y_hi = data->ys().maxCoeff();
  } else if (atoms && atoms->dim() == 2) {
    const Eigen::MatrixXd s = atoms->support();
    x_lo = s.col(0).minCoeff();
    x_hi = s.col(0).maxCoeff();
    y_lo = s.col(1).minCoeff();
    y_hi = s.col(1).maxCoeff();
  }
  const double pad_x = 0.05 * (x_hi - x_lo + 1e-9), pad_y = 0.05 * (y_hi - y_lo + 1e-9);
  x_lo -= pad_x;
  x_hi += pad_x;
  y_lo -= pad_y;
  y_hi += pad_y;
  auto sx = [&](double x) { return margin + (x - x_lo) / (x_hi - x_lo) * (w - 2 * margin); };
  auto sy = [&](double y) { return h - margin - (y - y_lo) / (y_hi - y_lo) * (h - 2 * margin); };

  std::ofstream svg(path);
  svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w << "' height='" << h
      << "' viewBox='0 0 " << w << " " << h << "'>\n"
      << "<rect width='100%' height='100%' fill='white'/>\n"
      << "<rect x='" << margin << "' y='" << margin << "' width='" << w - 2 * margin
      << "' height='" << h - 2 * margin << "' fill='none' stroke='#555'/>\n";
  if (data && data->dim() >= 2) {
    for (Eigen::Index i = 0; i < data->n(); ++i)
      svg << "<circle cx='" << sx(data->xs()(i, 1)) << "' cy='" << sy(data->y(i))
          << "' r='1.6' fill='#999' fill-opacity='0.55'/>\n";
    if (atoms && atoms->dim() == 2) {
      for (std::size_t k = 0; k < atoms->size(); ++k) {
        const auto& a = atoms->atom(k);
        const double y1 = a.beta[0] + a.beta[1] * x_lo, y2 = a.beta[0] + a.beta[1] * x_hi;
        svg << "<line x1='" << sx(x_lo) << "' y1='" << sy(y1) << "' x2='" << sx(x_hi)
            << "' y2='" << sy(y2) << "' stroke='" << svg_color(k) << "' stroke-width='"
            << 1.0 + 6.0 * a.weight << "'/>\n";
      }
    }
  } else if (atoms && atoms->dim() == 2) {
    // coefficient-space scatter
    for (std::size_t k = 0; k < atoms->size(); ++k) {
      const auto& a = atoms->atom(k);
      svg << "<circle cx='" << sx(a.beta[0]) << "' cy='" << sy(a.beta[1]) << "' r='"
          << 2.0 + 20.0 * a.weight << "' fill='" << svg_color(0) << "' fill-opacity='0.7'/>\n";
    }
  }
  svg << "</svg>\n";
  if (!svg) throw std::runtime_error("failed to write " + path);
}

// --- subcommands ------------------------------------------------------------

int cmd_simulate(const IoOptions& io, const std::string& model, std::int64_t n,
                 double sigma, const std::vector<double>& weights) {
  ensure_dir(io.out_dir);
  if (model == "sim1") {
    std::array<double, 3> w = {0.3, 0.3, 0.4};
    if (weights.size() == 3) w = {weights[0], weights[1], weights[2]};
    const Sim1Draw draw = gen_simulation1(n, sigma > 0.0 ? sigma : 0.5, w, io.seed);
    std::vector<std::vector<double>> rows;
    for (Eigen::Index i = 0; i < draw.data.n(); ++i)
      rows.push_back({draw.data.xs()(i, 1), draw.data.y(i)});
    write_csv(join(io.out_dir, "data.csv"), {"x", "y"}, rows);
    write_labels_csv(join(io.out_dir, "labels.csv"), draw.labels);
    write_atoms_csv(join(io.out_dir, "truth_atoms.csv"), draw.truth);
  } else {
    const Sim2Draw draw = gen_simulation2(n, sigma > 0.0 ? sigma : 0.2, io.seed);
    std::vector<std::vector<double>> rows;
    for (Eigen::Index i = 0; i < draw.data.n(); ++i)
      rows.push_back({draw.data.xs()(i, 1), draw.data.y(i)});
    write_csv(join(io.out_dir, "data.csv"), {"x", "y"}, rows);
    write_points_csv(join(io.out_dir, "truth_betas.csv"), draw.true_betas);
  }
  return 0;
}

int cmd_fit(const IoOptions& io, const DataOptions& dopt, PipelineOptions popt,
            const std::string& method, bool cv, int cv_folds) {
  Dataset data = load_data(dopt);
  popt.seed = io.seed;
  popt.method = parse_method(method);
  if (!data.has_sigma()) {
    if (!cv) throw std::runtime_error("sigma is unknown: pass --sigma or --cv-sigma");
    CvFitterOptions cvo;
    cvo.box_lo = popt.box_lo;
    cvo.box_hi = popt.box_hi;
    cvo.seed = io.seed;
    const CvResult res =
        cv_sigma(data, cv_folds, default_sigma_grid(data), make_cv_fitter(cvo), io.seed);
    std::cerr << "cv-sigma selected " << res.sigma_hat << "\n";
    data = data.with_sigma(res.sigma_hat);
  }
  const PipelineResult fit = run_pipeline(data, popt);
  write_fit_outputs(fit, method, data, io.out_dir);
  return 0;
}

int cmd_postprocess(const IoOptions& io, const std::string& grid_path,
                    const std::string& mode, std::int64_t samples, double bandwidth,
                    double bandwidth_scale, int ridge_dim, const DataOptions& dopt) {
  ensure_dir(io.out_dir);
  const GridDensity g = read_grid_csv(grid_path);
  const int d = g.grid().dim();
  const KernelProfile profile = gaussian_profile(d);
  const Eigen::MatrixXd sample =
      sample_from_grid_density(g, samples, derive_seed(io.seed, "postprocess"));
  double h = bandwidth;
  if (!(h > 0.0))
    h = (bandwidth_scale > 0.0 ? bandwidth_scale : 1.0) *
        oversmooth_bandwidth(sample.rows(), d, scale_estimate_U(sample), profile);

  json j;
  j["mode"] = mode;
  j["bandwidth"] = h;
  j["samples"] = samples;
  if (mode == "meanshift") {
    const MeanShiftResult ms = mean_shift(sample, h, profile);
    const DiscreteMeasure measure = measure_from_modes(ms);
    write_atoms_csv(join(io.out_dir, "atoms.csv"), measure);
    j["mode_count"] = measure.size();
    if (!dopt.path.empty()) {
      const Dataset data = load_data(dopt);
      write_labels_csv(join(io.out_dir, "labels.csv"),
                       posterior_cluster_assign(measure, data));
    }
  } else {
    const Eigen::MatrixXd ridge = scms(sample, h, profile, ridge_dim);
    write_points_csv(join(io.out_dir, "ridge.csv"), ridge);
    j["ridge_points"] = ridge.rows();
  }
  std::ofstream(join(io.out_dir, "postprocess.json")) << j.dump(2) << "\n";
  return 0;
}

int cmd_cv_sigma(const IoOptions& io, const DataOptions& dopt, int folds,
                 std::vector<double> sigmas) {
  ensure_dir(io.out_dir);
  const Dataset data = load_data(dopt);
  CvFitterOptions cvo;
  cvo.seed = io.seed;
  if (sigmas.empty()) sigmas = default_sigma_grid(data);
  const CvResult res = cv_sigma(data, folds, sigmas, make_cv_fitter(cvo), io.seed);
  std::vector<std::vector<double>> rows;
  for (std::size_t s = 0; s < res.sigma_grid.size(); ++s)
    rows.push_back({res.sigma_grid[s], res.curve[s], static_cast<double>(res.excluded[s])});
  write_csv(join(io.out_dir, "cv_curve.csv"), {"sigma", "cv", "excluded"}, rows);
  json j;
  j["sigma_hat"] = res.sigma_hat;
  j["folds"] = folds;
  std::ofstream(join(io.out_dir, "cv.json")) << j.dump(2) << "\n";
  std::cout << res.sigma_hat << "\n";
  return 0;
}

int cmd_experiment(const IoOptions& io, const std::string& model, const std::string& method,
                   std::int64_t n, int reps, double sigma, bool cv, int cv_folds,
                   PipelineOptions popt) {
  if (model != "sim1")
    throw std::runtime_error("experiment supports --model sim1 only");
  ensure_dir(io.out_dir);
  std::vector<ReplicationRecord> records;
  std::vector<std::vector<double>> run_rows;
  DiscreteMeasure truth = gen_simulation1(2, 0).truth;

  for (int r = 0; r < reps; ++r) {
    const std::uint64_t rep_seed = derive_seed(io.seed, "rep", static_cast<std::uint64_t>(r));
    const Sim1Draw draw = gen_simulation1(n, sigma, {0.3, 0.3, 0.4}, rep_seed);
    truth = draw.truth;
    ReplicationRecord rec;
    try {
      Dataset data = draw.data;
      if (cv) {
        CvFitterOptions cvo;
        cvo.seed = rep_seed;
        const Dataset blind(data.xs(), data.ys());
        const CvResult res = cv_sigma(blind, cv_folds, default_sigma_grid(blind),
                                      make_cv_fitter(cvo), rep_seed);
        data = data.with_sigma(res.sigma_hat);
      }
      const auto t0 = std::chrono::steady_clock::now();
      PipelineOptions f = popt;
      f.method = parse_method(method);
      f.seed = rep_seed;
      const PipelineResult fit = run_pipeline(data, f);
      rec.wall_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      rec.estimate = fit.measure;
      rec.ari =
          adjusted_rand_index(posterior_cluster_assign(*fit.measure, data), draw.labels);
      rec.ari_oracle =
          adjusted_rand_index(posterior_cluster_assign(draw.truth, data), draw.labels);
      rec.w2 = wasserstein2(draw.truth, *fit.measure);
    } catch (const std::exception& e) {
      std::cerr << "replication " << r << " failed: " << e.what() << "\n";
      rec.failed = true;
    }
    run_rows.push_back({static_cast<double>(r), rec.failed ? 1.0 : 0.0, rec.ari,
                        rec.ari_oracle,
                        rec.estimate ? static_cast<double>(rec.estimate->size()) : 0.0,
                        rec.w2, rec.wall_seconds});
    records.push_back(std::move(rec));
  }

  const ExperimentSummary summary = experiment_summary(records, truth);
  write_csv(join(io.out_dir, "runs.csv"),
            {"rep", "failed", "ari", "ari_truth", "k_hat", "w2", "wall_seconds"}, run_rows);
  std::ofstream(join(io.out_dir, "summary.csv")) << summary.to_csv();
  std::ofstream(join(io.out_dir, "summary.txt")) << summary.to_text();
  std::cout << summary.to_text();
  return 0;
}

int cmd_plotdata(const IoOptions& io, const std::string& fit_dir, const DataOptions& dopt,
                 bool svg) {
  ensure_dir(io.out_dir);
  std::optional<DiscreteMeasure> atoms;
  bool any = false;
  if (fs::exists(join(fit_dir, "atoms.csv"))) {
    any = true;
    atoms = read_atoms_csv(join(fit_dir, "atoms.csv"));
    if (atoms->dim() == 2) {
      std::vector<std::vector<double>> lines;
      for (const auto& a : atoms->atoms()) lines.push_back({a.beta[0], a.beta[1], a.weight});
      write_csv(join(io.out_dir, "lines.csv"), {"intercept", "slope", "weight"}, lines);
    }
    std::vector<std::vector<double>> scatter;
    for (const auto& a : atoms->atoms()) {
      std::vector<double> row;
      for (Eigen::Index k = 0; k < a.beta.size(); ++k) row.push_back(a.beta[k]);
      row.push_back(a.weight);
      scatter.push_back(std::move(row));
    }
    std::vector<std::string> header;
    for (int k = 0; k < atoms->dim(); ++k) header.push_back("b" + std::to_string(k + 1));
    header.push_back("weight");
    write_csv(join(io.out_dir, "beta_scatter.csv"), header, scatter);
  } else if (fs::exists(join(fit_dir, "particles.csv"))) {
    any = true;
    const CsvTable t = read_csv(join(fit_dir, "particles.csv"));
    write_csv(join(io.out_dir, "beta_scatter.csv"), t.header, t.rows);
  }
  if (fs::exists(join(fit_dir, "grid.csv"))) {
    any = true;
    write_grid_csv(join(io.out_dir, "heatmap.csv"), read_grid_csv(join(fit_dir, "grid.csv")));
  }
  if (!any) throw std::runtime_error("plotdata: no estimator files under " + fit_dir);

  if (svg) {
    std::optional<Dataset> data;
    if (!dopt.path.empty()) data = load_data(dopt);
    write_svg_plot(join(io.out_dir, "plot.svg"), data ? &*data : nullptr,
                   atoms ? &*atoms : nullptr);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nonparametric coefficient-prior estimation for mixtures of linear regressions"};
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key=value configuration file");

  IoOptions io;
  app.add_option("--threads", io.threads, "worker threads (0 = hardware)")
      ->envname("REGMIX_THREADS");
  app.add_option("--out", io.out_dir, "output directory")->envname("REGMIX_OUT");
  app.add_option("--seed", io.seed, "master seed; all randomness derives from it");

  auto* sim = app.add_subcommand("simulate", "generate a synthetic dataset");
  std::string model = "sim1";
  std::int64_t sim_n = 1000;
  double sim_sigma = 0.0;
  std::vector<double> sim_weights;
  sim->add_option("--model", model, "sim1 | sim2")->check(CLI::IsMember({"sim1", "sim2"}));
  sim->add_option("--n", sim_n, "sample size")->check(CLI::PositiveNumber);
  sim->add_option("--sigma", sim_sigma, "noise scale (default 0.5 / 0.2)");
  sim->add_option("--weights", sim_weights, "three component weights (sim1)")->expected(3);

  DataOptions dopt;
  auto add_data_options = [&dopt](CLI::App* cmd, bool required) {
    auto* o = cmd->add_option("--data", dopt.path, "dataset CSV");
    if (required) o->required();
    cmd->add_option("--x-cols", dopt.x_cols, "covariate column names");
    cmd->add_option("--y-col", dopt.y_col, "response column name");
    cmd->add_flag("--no-intercept", dopt.no_intercept, "do not prepend a constant-1 column");
  };

  auto* fit = app.add_subcommand("fit", "estimate the coefficient prior");
  PipelineOptions popt;
  std::string fit_method = "npkmle";
  bool fit_cv = false;
  int fit_cv_folds = 5;
  add_data_options(fit, true);
  fit->add_option("--method", fit_method, "npmle | npkmle | gem")
      ->check(CLI::IsMember({"npmle", "npkmle", "gem"}));
  fit->add_option("--sigma", dopt.sigma, "noise scale");
  fit->add_flag("--cv-sigma", fit_cv, "estimate sigma by cross-validation");
  fit->add_option("--cv-folds", fit_cv_folds, "folds for --cv-sigma");
  std::string fit_init = "npmle";
  fit->add_option("--init", fit_init, "npmle | uniform")
      ->check(CLI::IsMember({"npmle", "uniform"}));
  fit->add_option("--box-lo", popt.box_lo, "coefficient box lower bound");
  fit->add_option("--box-hi", popt.box_hi, "coefficient box upper bound");
  fit->add_option("--grid-nodes", popt.grid_nodes, "quadrature nodes per dimension");
  fit->add_option("--bandwidth", popt.bandwidth, "kernel bandwidth (default: oversmoothing rule)");
  fit->add_option("--bandwidth-scale", popt.bandwidth_scale,
                  "multiplier on the oversmoothing bandwidth");
  fit->add_option("--merge-radius", popt.merge_radius, "atom aggregation radius");
  fit->add_option("--particles", popt.particles, "particle count (default n)");
  fit->add_option("--max-iter", popt.max_iter, "iteration cap (outer loop)");
  fit->add_option("--l2-tol", popt.l2_tol, "density-EM L2 stop threshold");
  fit->add_option("--inner-tol", popt.inner_tol, "inner-loop displacement tolerance");
  fit->add_option("--outer-tol", popt.outer_tol, "outer relative log-likelihood tolerance");

  auto* post = app.add_subcommand("postprocess", "mode or ridge extraction from a density fit");
  std::string grid_path, pp_mode = "meanshift";
  std::int64_t pp_samples = 10000;
  double pp_bandwidth = 0.0, pp_scale = 0.0;
  int ridge_dim = 1;
  post->add_option("--grid", grid_path, "grid.csv from a density fit")->required();
  post->add_option("--mode", pp_mode, "meanshift | scms")
      ->check(CLI::IsMember({"meanshift", "scms"}));
  post->add_option("--samples", pp_samples, "points sampled from the density");
  post->add_option("--bandwidth", pp_bandwidth, "bandwidth (default: oversmoothing rule)");
  post->add_option("--bandwidth-scale", pp_scale, "multiplier on the oversmoothing bandwidth");
  post->add_option("--ridge-dim", ridge_dim, "target ridge dimension (scms)");
  add_data_options(post, false);
  post->add_option("--sigma", dopt.sigma, "noise scale for labeling --data");

  auto* cv = app.add_subcommand("cv-sigma", "cross-validate the noise scale");
  int cv_folds = 5;
  std::vector<double> cv_sigmas;
  add_data_options(cv, true);
  cv->add_option("--folds", cv_folds, "fold count");
  cv->add_option("--sigmas", cv_sigmas, "candidate values (default: auto grid)");

  auto* exp = app.add_subcommand("experiment", "replicated simulation study");
  std::string exp_method = "npkmle";
  std::int64_t exp_n = 1000;
  int exp_reps = 20;
  double exp_sigma = 0.5;
  bool exp_cv = false;
  exp->add_option("--model", model, "sim1")->check(CLI::IsMember({"sim1", "sim2"}));
  exp->add_option("--method", exp_method, "npkmle | gem | npmle-ms")
      ->check(CLI::IsMember({"npkmle", "gem", "npmle-ms"}));
  exp->add_option("--n", exp_n, "sample size per replication")->check(CLI::PositiveNumber);
  exp->add_option("--reps", exp_reps, "replication count")->check(CLI::PositiveNumber);
  exp->add_option("--sigma", exp_sigma, "true noise scale");
  exp->add_flag("--cv-sigma", exp_cv, "estimate sigma per replication");
  exp->add_option("--cv-folds", fit_cv_folds, "folds for --cv-sigma");
  exp->add_option("--grid-nodes", popt.grid_nodes, "quadrature nodes per dimension");
  std::string exp_init = "npmle";
  exp->add_option("--init", exp_init, "npmle | uniform")
      ->check(CLI::IsMember({"npmle", "uniform"}));
  exp->add_option("--bandwidth-scale", popt.bandwidth_scale,
                  "multiplier on the oversmoothing bandwidth");

  auto* plot = app.add_subcommand("plotdata", "emit plot-ready CSVs from fit outputs");
  std::string fit_dir = ".";
  bool svg = false;
  plot->add_option("--fit", fit_dir, "directory with fit outputs")->required();
  add_data_options(plot, false);
  plot->add_flag("--svg", svg, "also render a vector-graphic plot");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (io.threads > 0) set_num_threads(io.threads);
    if (sim->parsed()) return cmd_simulate(io, model, sim_n, sim_sigma, sim_weights);
    if (fit->parsed()) {
      popt.init = fit_init == "uniform" ? PipelineOptions::Init::uniform
                                        : PipelineOptions::Init::npmle;
      return cmd_fit(io, dopt, popt, fit_method, fit_cv, fit_cv_folds);
    }
    if (post->parsed())
      return cmd_postprocess(io, grid_path, pp_mode, pp_samples, pp_bandwidth, pp_scale,
                             ridge_dim, dopt);
    if (cv->parsed()) return cmd_cv_sigma(io, dopt, cv_folds, cv_sigmas);
    if (exp->parsed()) {
      popt.init = exp_init == "uniform" ? PipelineOptions::Init::uniform
                                        : PipelineOptions::Init::npmle;
      return cmd_experiment(io, model, exp_method, exp_n, exp_reps, exp_sigma, exp_cv,
                            fit_cv_folds, popt);
    }
    if (plot->parsed()) return cmd_plotdata(io, fit_dir, dopt, svg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
