#include "regmix/postprocess.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "regmix/parallel.hpp"

namespace regmix {

namespace {

constexpr double kStepTol = 1e-6;
constexpr int kMaxIter = 10000;

// Shifted kernel weights u_j = w(t_j) / max_j w(t_j); the shift cancels in all
// weighted means, so far-away queries cannot underflow to 0/0.
Eigen::ArrayXd shifted_weights(const Eigen::MatrixXd& points, double h,
                               const KernelProfile& profile, const Eigen::VectorXd& x) {
  const Eigen::ArrayXd t =
      (points.rowwise() - x.transpose()).rowwise().squaredNorm().array() / (h * h);
  Eigen::ArrayXd lw(t.size());
  for (Eigen::Index j = 0; j < t.size(); ++j) lw[j] = profile.log_w(t[j]);
  const double mx = lw.maxCoeff();
  return (lw - mx).exp();
}

Eigen::VectorXd mean_shift_map(const Eigen::MatrixXd& points, double h,
                               const KernelProfile& profile, const Eigen::VectorXd& x) {
  const Eigen::ArrayXd u = shifted_weights(points, h, profile, x);
  return (points.array().colwise() * u).colwise().sum().transpose() / u.sum();
}

// single-linkage clusters of row vectors under `radius`, ordered by smallest
// member index; returns cluster means and per-row cluster ids
void merge_points(const Eigen::MatrixXd& pts, double radius, Eigen::MatrixXd& centers,
                  std::vector<int>& ids) {
  const Eigen::Index n = pts.rows();
  std::vector<Eigen::Index> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  std::function<Eigen::Index(Eigen::Index)> find = [&](Eigen::Index a) {
    while (parent[static_cast<std::size_t>(a)] != a) {
      parent[static_cast<std::size_t>(a)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
      a = parent[static_cast<std::size_t>(a)];
    }
    return a;
  };
  const double r2 = radius * radius;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      if ((pts.row(i) - pts.row(j)).squaredNorm() < r2) {
        const Eigen::Index ri = find(i), rj = find(j);
        if (ri != rj) parent[static_cast<std::size_t>(std::max(ri, rj))] = std::min(ri, rj);
      }
  std::vector<Eigen::Index> roots;
  ids.assign(static_cast<std::size_t>(n), -1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index r = find(i);
    auto it = std::find(roots.begin(), roots.end(), r);
    if (it == roots.end()) {
      roots.push_back(r);
      ids[static_cast<std::size_t>(i)] = static_cast<int>(roots.size()) - 1;
    } else {
      ids[static_cast<std::size_t>(i)] = static_cast<int>(it - roots.begin());
    }
  }
  centers = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(roots.size()), pts.cols());
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(roots.size()));
  for (Eigen::Index i = 0; i < n; ++i) {
    centers.row(ids[static_cast<std::size_t>(i)]) += pts.row(i);
    counts[ids[static_cast<std::size_t>(i)]] += 1.0;
  }
  centers.array().colwise() /= counts.array();
}

}  // namespace

KdeEval kde_eval_grad_hess(const Eigen::MatrixXd& points, double h,
                           const KernelProfile& profile, const Eigen::VectorXd& query) {
  if (points.rows() < 1) throw std::invalid_argument("kde_eval_grad_hess: empty sample");
  const Eigen::Index mc = points.rows();
  const int d = static_cast<int>(points.cols());
  const double h2 = h * h;
  const double scale0 = 1.0 / (static_cast<double>(mc) * std::pow(h, d));
  const double scale1 = scale0 / h2;

  const Eigen::MatrixXd diffs = (-points).rowwise() + query.transpose();  // x - p_j
  const Eigen::ArrayXd t = diffs.rowwise().squaredNorm().array() / h2;
  // Gaussian profile: v = c e^{-t/2}, w = v/2, v'' = v/4
  const Eigen::ArrayXd v = profile.v_max() * (-0.5 * t).exp();
  const Eigen::ArrayXd w = 0.5 * v;
  const Eigen::ArrayXd v2 = 0.25 * v;

  KdeEval out;
  out.density = v.sum() * scale0;
  out.gradient = -2.0 * scale1 * (diffs.transpose() * w.matrix());
  out.hessian = scale1 * (-2.0 * w.sum() * Eigen::MatrixXd::Identity(d, d) +
                          (4.0 / h2) * diffs.transpose() *
                              (diffs.array().colwise() * v2).matrix());
  return out;
}

MeanShiftResult mean_shift(const Eigen::MatrixXd& points, double h,
                           const KernelProfile& profile,
                           const std::optional<Eigen::MatrixXd>& start_points) {
  if (!(h > 0.0)) throw std::invalid_argument("mean_shift: bandwidth must be > 0");
  const Eigen::MatrixXd& starts = start_points ? *start_points : points;
  const Eigen::Index ns = starts.rows();
  const int d = static_cast<int>(points.cols());

  Eigen::MatrixXd limits(ns, d);
  std::vector<char> ok(static_cast<std::size_t>(ns), 0);
  parallel_chunks(ns, [&](int, std::int64_t s0, std::int64_t s1) {
    for (std::int64_t s = s0; s < s1; ++s) {
      Eigen::VectorXd x = starts.row(s).transpose();
      bool converged = false;
      for (int it = 0; it < kMaxIter; ++it) {
        Eigen::VectorXd next = mean_shift_map(points, h, profile, x);
        const double disp = (next - x).norm();
        x = std::move(next);
        if (disp < kStepTol) {
          converged = true;
          break;
        }
      }
      limits.row(s) = x.transpose();
      ok[static_cast<std::size_t>(s)] = converged ? 1 : 0;
    }
  });

  // merge converged limits into modes
  std::vector<Eigen::Index> conv_rows;
  for (Eigen::Index s = 0; s < ns; ++s)
    if (ok[static_cast<std::size_t>(s)]) conv_rows.push_back(s);
  MeanShiftResult res;
  res.labels.assign(static_cast<std::size_t>(ns), -1);
  if (conv_rows.empty()) {
    res.modes.resize(0, d);
    return res;
  }
  Eigen::MatrixXd conv(static_cast<Eigen::Index>(conv_rows.size()), d);
  for (std::size_t k = 0; k < conv_rows.size(); ++k)
    conv.row(static_cast<Eigen::Index>(k)) = limits.row(conv_rows[k]);
  Eigen::MatrixXd centers;
  std::vector<int> ids;
  merge_points(conv, 0.1 * h, centers, ids);

  // sort modes lexicographically so the output does not depend on start order
  std::vector<int> order(static_cast<std::size_t>(centers.rows()));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    for (Eigen::Index k = 0; k < centers.cols(); ++k) {
      if (centers(a, k) != centers(b, k)) return centers(a, k) < centers(b, k);
    }
    return false;
  });
  std::vector<int> rank(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) rank[static_cast<std::size_t>(order[k])] = static_cast<int>(k);
  res.modes.resize(centers.rows(), d);
  for (std::size_t k = 0; k < order.size(); ++k) res.modes.row(static_cast<Eigen::Index>(k)) = centers.row(order[k]);
  for (std::size_t k = 0; k < conv_rows.size(); ++k)
    res.labels[static_cast<std::size_t>(conv_rows[k])] = rank[static_cast<std::size_t>(ids[k])];
  return res;
}

DiscreteMeasure measure_from_modes(const MeanShiftResult& ms) {
  if (ms.modes.rows() == 0)
    throw std::invalid_argument("measure_from_modes: no modes");
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(ms.modes.rows());
  double total = 0.0;
  for (int lbl : ms.labels) {
    if (lbl >= 0) {
      counts[lbl] += 1.0;
      total += 1.0;
    }
  }
  std::vector<Atom> atoms;
  for (Eigen::Index k = 0; k < ms.modes.rows(); ++k)
    if (counts[k] > 0.0)
      atoms.push_back({ms.modes.row(k).transpose(), counts[k] / total});
  return DiscreteMeasure(std::move(atoms));
}

Eigen::MatrixXd scms(const Eigen::MatrixXd& points, double h, const KernelProfile& profile,
                     int ridge_dim, const std::optional<Eigen::MatrixXd>& start_points) {
  const int d = static_cast<int>(points.cols());
  if (ridge_dim < 0 || ridge_dim >= d)
    throw std::invalid_argument("scms: need 0 <= ridge_dim < d");
  const Eigen::MatrixXd& starts = start_points ? *start_points : points;
  const Eigen::Index ns = starts.rows();

  Eigen::MatrixXd limits(ns, d);
  std::vector<char> ok(static_cast<std::size_t>(ns), 0);
  parallel_chunks(ns, [&](int, std::int64_t s0, std::int64_t s1) {
    for (std::int64_t s = s0; s < s1; ++s) {
      Eigen::VectorXd x = starts.row(s).transpose();
      bool converged = false;
      for (int it = 0; it < kMaxIter; ++it) {
        const KdeEval e = kde_eval_grad_hess(points, h, profile, x);
        if (!e.hessian.allFinite())
          throw std::runtime_error("scms: non-finite Hessian at query (" +
                                   std::to_string(x[0]) + ", ...)");
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(e.hessian);
        if (eig.info() != Eigen::Success)
          throw std::runtime_error("scms: eigendecomposition failed at query (" +
                                   std::to_string(x[0]) + ", ...)");
        // eigenvalues ascending; span of the d - ridge_dim smallest
        const Eigen::MatrixXd v = eig.eigenvectors().leftCols(d - ridge_dim);
        if ((v.transpose() * e.gradient).norm() < kStepTol) {
          converged = true;
          break;
        }
        const Eigen::VectorXd ms_step =
            mean_shift_map(points, h, profile, x) - x;
        x += v * (v.transpose() * ms_step);
      }
      limits.row(s) = x.transpose();
      ok[static_cast<std::size_t>(s)] = converged ? 1 : 0;
    }
  });

  std::vector<Eigen::Index> keep;
  for (Eigen::Index s = 0; s < ns; ++s)
    if (ok[static_cast<std::size_t>(s)]) keep.push_back(s);
  Eigen::MatrixXd out(static_cast<Eigen::Index>(keep.size()), d);
  for (std::size_t k = 0; k < keep.size(); ++k)
    out.row(static_cast<Eigen::Index>(k)) = limits.row(keep[k]);
  return out;
}

}  // namespace regmix
