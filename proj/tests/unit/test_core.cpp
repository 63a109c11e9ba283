#include <cmath>
#include <random>

#include "doctest.h"
#include "regmix/dataset.hpp"
#include "regmix/discrete_measure.hpp"
#include "regmix/errors.hpp"
#include "regmix/grid_density.hpp"
#include "regmix/likelihood.hpp"

using namespace regmix;

namespace {
Eigen::VectorXd vec2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return v;
}
}  // namespace

TEST_CASE("dataset invariants") {
  Eigen::MatrixXd xs(2, 2);
  xs << 1.0, 0.5, 1.0, -0.5;
  Eigen::VectorXd ys(2);
  ys << 0.1, 0.2;
  CHECK_NOTHROW(Dataset(xs, ys, 0.5));
  CHECK_THROWS_AS(Dataset(xs, ys, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(Dataset(xs, Eigen::VectorXd::Ones(3)), std::invalid_argument);
  Eigen::MatrixXd bad = xs;
  bad(0, 0) = std::nan("");
  CHECK_THROWS_AS(Dataset(bad, ys), std::invalid_argument);
  CHECK_THROWS_AS(Dataset(xs, ys).sigma(), std::logic_error);
}

TEST_CASE("discrete measure merges exact duplicates and validates weights") {
  std::vector<Atom> atoms = {{vec2(1, 2), 0.25}, {vec2(1, 2), 0.25}, {vec2(0, 0), 0.5}};
  const DiscreteMeasure g(atoms);
  CHECK(g.size() == 2);
  CHECK(g.atom(0).weight == doctest::Approx(0.5));

  CHECK_THROWS_AS(DiscreteMeasure({{vec2(0, 0), 0.5}, {vec2(1, 1), 0.6}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(DiscreteMeasure({{vec2(0, 0), -0.2}, {vec2(1, 1), 1.2}}),
                  std::invalid_argument);
}

TEST_CASE("gaussian density values") {
  CHECK(gaussian_density(0.0, 1.0) == doctest::Approx(0.3989422804).epsilon(1e-9));
  CHECK(gaussian_density(0.0, 0.5) == doctest::Approx(0.7978845608).epsilon(1e-9));
  // high-precision reference evaluated with 30-digit arithmetic
  CHECK(gaussian_density(1.3, 0.7) ==
        doctest::Approx(0.101595769327276364866).epsilon(1e-12));
  CHECK_THROWS_AS(gaussian_density(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("incomplete log-likelihood for discrete measures") {
  Eigen::MatrixXd xs(1, 2);
  xs << 1.0, 0.4;
  Eigen::VectorXd ys(1);
  ys << 0.9;
  const Dataset data(xs, ys, 0.6);

  SUBCASE("single atom equals the log density of the residual") {
    const DiscreteMeasure g({{vec2(0.5, 1.0), 1.0}});
    const double r = 0.9 - (0.5 + 0.4 * 1.0);
    CHECK(incomplete_loglik(g, data) ==
          doctest::Approx(std::log(gaussian_density(r, 0.6))).epsilon(1e-12));
  }

  SUBCASE("two equal-weight atoms form a two-term mixture") {
    const DiscreteMeasure g({{vec2(0.5, 1.0), 0.5}, {vec2(-0.2, 0.3), 0.5}});
    const double r1 = 0.9 - (0.5 + 0.4);
    const double r2 = 0.9 - (-0.2 + 0.4 * 0.3);
    const double expected =
        std::log(0.5 * gaussian_density(r1, 0.6) + 0.5 * gaussian_density(r2, 0.6));
    CHECK(incomplete_loglik(g, data) == doctest::Approx(expected).epsilon(1e-12));
  }

  SUBCASE("invariant under atom permutation") {
    const DiscreteMeasure a({{vec2(0.5, 1.0), 0.3}, {vec2(-0.2, 0.3), 0.7}});
    const DiscreteMeasure b({{vec2(-0.2, 0.3), 0.7}, {vec2(0.5, 1.0), 0.3}});
    CHECK(incomplete_loglik(a, data) == doctest::Approx(incomplete_loglik(b, data)));
  }
}

TEST_CASE("log-space evaluation survives tiny sigma") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd xs(50, 2);
  Eigen::VectorXd ys(50);
  for (int i = 0; i < 50; ++i) {
    xs(i, 0) = 1.0;
    xs(i, 1) = gauss(rng);
    ys[i] = 2.0 * xs(i, 1) - 1.0 + 1e-3 * gauss(rng);
  }
  const Dataset data(xs, ys, 1e-6);
  const DiscreteMeasure g({{vec2(-1.0, 2.0), 0.5}, {vec2(3.0, 3.0), 0.5}});
  const double l = incomplete_loglik(g, data);
  CHECK(std::isfinite(l));

  const GridDensity u = GridDensity::uniform(QuadratureGrid::cube(2, -4.0, 4.0, 64));
  CHECK(std::isfinite(incomplete_loglik(u, data)));
}

TEST_CASE("grid likelihood matches a refined-grid oracle") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd xs(5, 2);
  Eigen::VectorXd ys(5);
  for (int i = 0; i < 5; ++i) {
    xs(i, 0) = 1.0;
    xs(i, 1) = gauss(rng);
    ys[i] = 0.5 + 0.8 * xs(i, 1) + 0.4 * gauss(rng);
  }
  const Dataset data(xs, ys, 0.7);

  // smooth non-uniform density: an isotropic Gaussian bump, renormalized
  auto bump_values = [&](const QuadratureGrid& g) {
    const Eigen::MatrixXd nodes = g.node_matrix();
    Eigen::VectorXd v = (-(nodes.col(0).array().square() +
                           (nodes.col(1).array() - 0.5).square()) /
                         1.8)
                            .exp();
    return v;
  };
  const QuadratureGrid coarse = QuadratureGrid::cube(2, -4.0, 4.0, 161);
  const QuadratureGrid fine = QuadratureGrid::cube(2, -4.0, 4.0, 1000);  // 10^6 nodes
  const GridDensity gc(coarse, bump_values(coarse), true);
  const GridDensity gf(fine, bump_values(fine), true);
  const double lc = incomplete_loglik(gc, data);
  const double lf = incomplete_loglik(gf, data);
  CHECK(std::abs(lc - lf) / std::abs(lf) < 1e-4);
}

TEST_CASE("posterior cluster assignment") {
  Eigen::MatrixXd xs(3, 2);
  xs << 1.0, 0.0, 1.0, 1.0, 1.0, -1.0;
  Eigen::VectorXd ys(3);
  ys << 0.0, 2.0, -1.0;
  const Dataset data(xs, ys, 0.5);

  SUBCASE("single component labels everything zero") {
    const DiscreteMeasure g({{vec2(0.3, 0.3), 1.0}});
    const auto labels = posterior_cluster_assign(g, data);
    CHECK(labels == std::vector<int>{0, 0, 0});
  }

  SUBCASE("exact tie goes to the lowest atom index") {
    // observation (x=(1,0), y=0) sits exactly between intercepts +c and -c
    const DiscreteMeasure g({{vec2(0.7, 1.0), 0.5}, {vec2(-0.7, 1.0), 0.5}});
    const auto labels = posterior_cluster_assign(g, data);
    CHECK(labels[0] == 0);
  }

  SUBCASE("argmax is invariant under rescaling weights before normalization") {
    const DiscreteMeasure a(
        {{vec2(0.0, 1.0), 0.2}, {vec2(1.0, -1.0), 0.3}, {vec2(-1.0, 0.5), 0.5}});
    const auto labels = posterior_cluster_assign(a, data);
    // brute-force argmax with the same weights scaled by 10, unnormalized
    const double scaled[3] = {2.0, 3.0, 5.0};
    for (Eigen::Index i = 0; i < data.n(); ++i) {
      int best = 0;
      double best_score = -1.0;
      for (int j = 0; j < 3; ++j) {
        const double r = data.y(i) - data.x(i).dot(a.atom(j).beta);
        const double score = scaled[j] * gaussian_density(r, data.sigma());
        if (score > best_score) {
          best_score = score;
          best = j;
        }
      }
      CHECK(labels[static_cast<std::size_t>(i)] == best);
    }
  }
}
