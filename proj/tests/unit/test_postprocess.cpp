#include <cmath>
#include <random>

#include "doctest.h"
#include "regmix/bandwidth.hpp"
#include "regmix/postprocess.hpp"

using namespace regmix;

TEST_CASE("kde evaluation: analytic derivatives") {
  const KernelProfile prof = gaussian_profile(2);
  Eigen::MatrixXd pts(2, 2);
  pts << 1.0, 0.0, -1.0, 0.0;
  const double h = 0.8;

  SUBCASE("gradient vanishes at the mean of a symmetric two-point sample") {
    Eigen::VectorXd mid = Eigen::VectorXd::Zero(2);
    const KdeEval e = kde_eval_grad_hess(pts, h, prof, mid);
    CHECK(e.gradient.norm() < 1e-14);
  }

  SUBCASE("gradient matches central finite differences of the density") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd sample(40, 2);
    for (int i = 0; i < 40; ++i) sample.row(i) << gauss(rng), gauss(rng);
    for (int rep = 0; rep < 20; ++rep) {
      Eigen::VectorXd x(2);
      x << u(rng), u(rng);
      const KdeEval e = kde_eval_grad_hess(sample, h, prof, x);
      const double eps = 1e-6;
      for (int k = 0; k < 2; ++k) {
        Eigen::VectorXd hi = x, lo = x;
        hi[k] += eps;
        lo[k] -= eps;
        const double fd = (kde_eval_grad_hess(sample, h, prof, hi).density -
                           kde_eval_grad_hess(sample, h, prof, lo).density) /
                          (2.0 * eps);
        CHECK(e.gradient[k] == doctest::Approx(fd).epsilon(1e-6));
      }
      CHECK((e.hessian - e.hessian.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    }
  }

  SUBCASE("hessian matches finite differences of the gradient") {
    Eigen::VectorXd x(2);
    x << 0.4, -0.3;
    const KdeEval e = kde_eval_grad_hess(pts, h, prof, x);
    const double eps = 1e-6;
    for (int k = 0; k < 2; ++k) {
      Eigen::VectorXd hi = x, lo = x;
      hi[k] += eps;
      lo[k] -= eps;
      const Eigen::VectorXd fd = (kde_eval_grad_hess(pts, h, prof, hi).gradient -
                                  kde_eval_grad_hess(pts, h, prof, lo).gradient) /
                                 (2.0 * eps);
      for (int j = 0; j < 2; ++j)
        CHECK(e.hessian(j, k) == doctest::Approx(fd[j]).epsilon(1e-5));
    }
  }
}

TEST_CASE("mean shift finds the single mode of a tight cluster") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int m = 500;
  Eigen::MatrixXd pts(m, 2);
  for (int i = 0; i < m; ++i) pts.row(i) << 0.7 + 0.3 * gauss(rng), -0.2 + 0.3 * gauss(rng);
  const KernelProfile prof = gaussian_profile(2);
  const double h = oversmooth_bandwidth(m, 2, scale_estimate_U(pts), prof);
  const MeanShiftResult res = mean_shift(pts, h, prof);
  REQUIRE(res.modes.rows() == 1);
  Eigen::VectorXd mean = pts.colwise().mean().transpose();
  CHECK((res.modes.row(0).transpose() - mean).norm() < 0.1);
  for (int lbl : res.labels) CHECK(lbl == 0);

  SUBCASE("limit point has a vanishing kde gradient") {
    const KdeEval e = kde_eval_grad_hess(pts, h, prof, res.modes.row(0).transpose());
    CHECK(e.gradient.norm() < 1e-5);
  }

  SUBCASE("density is non-decreasing along a trajectory") {
    Eigen::VectorXd x = pts.row(17).transpose();
    double f_prev = kde_eval_grad_hess(pts, h, prof, x).density;
    for (int it = 0; it < 200; ++it) {
      // one mean-shift update, re-implemented directly
      Eigen::ArrayXd w(m);
      for (int j = 0; j < m; ++j)
        w[j] = prof.w((x - pts.row(j).transpose()).squaredNorm() / (h * h));
      Eigen::VectorXd next =
          (pts.array().colwise() * w).colwise().sum().transpose() / w.sum();
      const double f = kde_eval_grad_hess(pts, h, prof, next).density;
      CHECK(f >= f_prev - 1e-12 * (1.0 + std::abs(f_prev)));
      if ((next - x).norm() < 1e-9) break;
      x = next;
      f_prev = f;
    }
  }
}

TEST_CASE("a start point already at a mode stays there") {
  std::mt19937_64 rng(29);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd pts(200, 2);
  for (int i = 0; i < 200; ++i) pts.row(i) << gauss(rng), gauss(rng);
  const KernelProfile prof = gaussian_profile(2);
  const double h = 1.0;
  const MeanShiftResult first = mean_shift(pts, h, prof);
  REQUIRE(first.modes.rows() >= 1);
  const Eigen::MatrixXd starts = first.modes;
  const MeanShiftResult again = mean_shift(pts, h, prof, starts);
  REQUIRE(again.modes.rows() == first.modes.rows());
  CHECK((again.modes - first.modes).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("merged mode set does not depend on start ordering") {
  std::mt19937_64 rng(41);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd pts(120, 2);
  for (int i = 0; i < 120; ++i) {
    const double cx = i % 2 == 0 ? 1.5 : -1.5;
    pts.row(i) << cx + 0.3 * gauss(rng), 0.3 * gauss(rng);
  }
  const KernelProfile prof = gaussian_profile(2);
  const double h = 0.6;
  const MeanShiftResult a = mean_shift(pts, h, prof, pts);
  Eigen::MatrixXd reversed = pts.colwise().reverse();
  const MeanShiftResult b = mean_shift(pts, h, prof, reversed);
  REQUIRE(a.modes.rows() == b.modes.rows());
  CHECK((a.modes - b.modes).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("scms with ridge dimension zero reduces to mode seeking") {
  std::mt19937_64 rng(53);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd pts(150, 2);
  for (int i = 0; i < 150; ++i) {
    const double cx = i % 2 == 0 ? 1.2 : -1.2;
    pts.row(i) << cx + 0.25 * gauss(rng), 0.25 * gauss(rng);
  }
  const KernelProfile prof = gaussian_profile(2);
  const double h = 0.5;
  const MeanShiftResult ms = mean_shift(pts, h, prof);
  const Eigen::MatrixXd ridge = scms(pts, h, prof, 0);
  REQUIRE(ridge.rows() > 0);
  for (Eigen::Index i = 0; i < ridge.rows(); ++i) {
    double best = 1e9;
    for (Eigen::Index k = 0; k < ms.modes.rows(); ++k)
      best = std::min(best, (ridge.row(i) - ms.modes.row(k)).norm());
    CHECK(best < 1e-3);
  }
}

TEST_CASE("scms recovers a circle as a one-dimensional ridge") {
  std::mt19937_64 rng(67);
  std::uniform_real_distribution<double> uangle(0.0, 2.0 * M_PI);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int m = 600;
  Eigen::MatrixXd pts(m, 2);
  for (int i = 0; i < m; ++i) {
    const double a = uangle(rng);
    const double r = 2.0 + 0.1 * gauss(rng);
    pts.row(i) << r * std::cos(a), r * std::sin(a);
  }
  const KernelProfile prof = gaussian_profile(2);
  const double h = 0.35;
  const Eigen::MatrixXd ridge = scms(pts, h, prof, 1);
  REQUIRE(ridge.rows() > 0);
  int inside = 0;
  for (Eigen::Index i = 0; i < ridge.rows(); ++i) {
    const double r = ridge.row(i).norm();
    if (r >= 1.8 && r <= 2.2) ++inside;
  }
  CHECK(static_cast<double>(inside) / ridge.rows() >= 0.95);

  SUBCASE("limits are stationary under one further step and projected gradient") {
    for (Eigen::Index i = 0; i < std::min<Eigen::Index>(ridge.rows(), 20); ++i) {
      const Eigen::MatrixXd again =
          scms(pts, h, prof, 1, Eigen::MatrixXd(ridge.row(i)));
      if (again.rows() == 1)
        CHECK((again.row(0) - ridge.row(i)).norm() < 1e-5);
      const KdeEval e = kde_eval_grad_hess(pts, h, prof, ridge.row(i).transpose());
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(e.hessian);
      const Eigen::MatrixXd v = eig.eigenvectors().leftCols(1);
      CHECK((v.transpose() * e.gradient).norm() < 1e-5);
    }
  }
}
