#include <cmath>
#include <random>

#include "doctest.h"
#include "regmix/bandwidth.hpp"
#include "regmix/errors.hpp"
#include "regmix/kernel.hpp"

using namespace regmix;

TEST_CASE("gaussian profile normalization and closed forms") {
  const KernelProfile p2 = gaussian_profile(2);
  CHECK(p2.v(0.0) == doctest::Approx(0.15915494309189534).epsilon(1e-12));
  CHECK(p2.roughness() == doctest::Approx(1.0 / (4.0 * M_PI)).epsilon(1e-12));

  // d=1 mass by Simpson quadrature, independent of the profile's own check
  const KernelProfile p1 = gaussian_profile(1);
  const int m = 20001;
  const double lo = -14.0, hi = 14.0, step = (hi - lo) / (m - 1);
  double acc = 0.0;
  for (int i = 0; i < m; ++i) {
    const double x = lo + i * step;
    const double w = (i == 0 || i == m - 1) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += w * p1.v(x * x);
  }
  acc *= step / 3.0;
  CHECK(acc == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("w equals -v' against central finite differences") {
  const KernelProfile p = gaussian_profile(2);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ut(1e-3, 50.0);
  for (int k = 0; k < 20; ++k) {
    const double t = ut(rng);
    const double eps = 1e-6 * std::max(1.0, t);
    const double fd = -(p.v(t + eps) - p.v(t - eps)) / (2.0 * eps);
    CHECK(p.w(t) == doctest::Approx(fd).epsilon(1e-6));
    CHECK(p.w(t) > 0.0);
  }
}

TEST_CASE("log of kernel sums is midpoint convex in the arguments") {
  // random midpoint convexity checks of t -> log(sum_i v(t_i))
  const KernelProfile p = gaussian_profile(2);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ut(0.0, 40.0);
  auto f = [&](const std::vector<double>& ts) {
    double acc = 0.0;
    for (double t : ts) acc += p.v(t);
    return std::log(acc);
  };
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> a(5), b(5), mid(5);
    for (int i = 0; i < 5; ++i) {
      a[i] = ut(rng);
      b[i] = ut(rng);
      mid[i] = 0.5 * (a[i] + b[i]);
    }
    CHECK(f(mid) <= 0.5 * f(a) + 0.5 * f(b) + 1e-12);
  }
}

TEST_CASE("oversmooth bandwidth closed-form value and scaling laws") {
  const KernelProfile p = gaussian_profile(2);
  // exact evaluation of the bracketed expression at d=2, n=1000, Gamma(5)=24
  CHECK(oversmooth_bandwidth(1000, 2, 1.0, p) ==
        doctest::Approx(0.30555293958102841).epsilon(1e-10));

  const double h1 = oversmooth_bandwidth(500, 2, 1.3, p);
  const double h2 = oversmooth_bandwidth(1000, 2, 1.3, p);
  CHECK(h2 / h1 == doctest::Approx(std::pow(2.0, -1.0 / 6.0)).epsilon(1e-12));
  CHECK(oversmooth_bandwidth(500, 2, 2.6, p) == doctest::Approx(2.0 * h1).epsilon(1e-12));

  CHECK_THROWS_AS(oversmooth_bandwidth(1000, 2, 0.0, p), std::invalid_argument);
  CHECK_THROWS_AS(oversmooth_bandwidth(1, 2, 1.0, p), std::invalid_argument);
}

TEST_CASE("scale estimate approximates unit scale for standard normal draws") {
  std::mt19937_64 rng(123);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int m = 100000;
  Eigen::MatrixXd sample(m, 2);
  for (int i = 0; i < m; ++i) {
    sample(i, 0) = gauss(rng);
    sample(i, 1) = gauss(rng);
  }
  CHECK(scale_estimate_U(sample) == doctest::Approx(1.349 / 1.34).epsilon(0.05));
}

TEST_CASE("scale estimate: degenerate dimensions and affine equivariance") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd sample(64, 2);
  for (int i = 0; i < 64; ++i) {
    sample(i, 0) = 2.0;  // constant dimension contributes zero
    sample(i, 1) = gauss(rng);
  }
  Eigen::MatrixXd spread_only = sample.col(1);
  const double u_two = scale_estimate_U(sample);
  const double u_one = scale_estimate_U(spread_only);
  CHECK(u_two == doctest::Approx(0.5 * u_one).epsilon(1e-12));

  const double c = 3.7;
  CHECK(scale_estimate_U((sample.array() * c).matrix()) ==
        doctest::Approx(c * u_two).epsilon(1e-12));

  Eigen::MatrixXd flat = Eigen::MatrixXd::Constant(10, 2, 1.0);
  CHECK_THROWS_AS(scale_estimate_U(flat), degenerate_scale_error);
}
