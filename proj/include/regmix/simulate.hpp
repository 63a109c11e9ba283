#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "regmix/dataset.hpp"
#include "regmix/discrete_measure.hpp"

namespace regmix {

struct Sim1Draw {
  Dataset data;
  std::vector<int> labels;  // true component per observation
  DiscreteMeasure truth;    // three-line prior
};

/// Three regression lines y = 3 - x, y = 1 + 1.5x, y = -1 + 0.5x with weights
/// (.3, .3, .4) by default, x ~ U[-1, 3], covariate row (1, x), Gaussian noise.
Sim1Draw gen_simulation1(std::int64_t n, double sigma, std::array<double, 3> weights,
                         std::uint64_t seed);
Sim1Draw gen_simulation1(std::int64_t n, std::uint64_t seed);

struct Sim2Draw {
  Dataset data;
  Eigen::MatrixXd true_betas;  // n x 2
};

/// Coefficients drawn from the even mixture of the uniform distributions on
/// the circles of radius 1 and 2; x ~ U[-1, 3], covariate row (1, x).
Sim2Draw gen_simulation2(std::int64_t n, double sigma, std::uint64_t seed);
Sim2Draw gen_simulation2(std::int64_t n, std::uint64_t seed);

}  // namespace regmix
