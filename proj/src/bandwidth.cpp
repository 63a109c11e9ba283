#include "regmix/bandwidth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "regmix/errors.hpp"

namespace regmix {

double oversmooth_bandwidth(std::int64_t n, int dim, double scale_u,
                            const KernelProfile& profile) {
  if (n < 2) throw std::invalid_argument("oversmooth_bandwidth: need n >= 2");
  if (scale_u <= 0.0)
    throw std::invalid_argument("oversmooth_bandwidth: scale U must be > 0");
  const double d = static_cast<double>(dim);
  const double log_num = 0.5 * (d + 6.0) * std::log(d + 8.0) +
                         0.5 * d * std::log(M_PI) + std::log(profile.roughness());
  const double log_den = std::log(16.0 * static_cast<double>(n)) +
                         std::lgamma(0.5 * (d + 8.0)) + std::log(d * (d + 2.0));
  return scale_u * std::exp((log_num - log_den) / (d + 4.0));
}

namespace {
// Linearly interpolated quantile of a sorted sample (index = (m-1)p).
double quantile_sorted(const std::vector<double>& s, double p) {
  const double idx = (static_cast<double>(s.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(idx);
  if (lo + 1 >= s.size()) return s.back();
  const double frac = idx - static_cast<double>(lo);
  return s[lo] + frac * (s[lo + 1] - s[lo]);
}
}  // namespace

double scale_estimate_U(const Eigen::MatrixXd& sample) {
  const auto m = sample.rows();
  const int d = static_cast<int>(sample.cols());
  if (m < 4) throw std::invalid_argument("scale_estimate_U: need at least 4 points");
  double acc = 0.0;
  bool any_positive = false;
  std::vector<double> col(static_cast<std::size_t>(m));
  for (int j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < m; ++i) col[static_cast<std::size_t>(i)] = sample(i, j);
    std::sort(col.begin(), col.end());
    const double iqr = quantile_sorted(col, 0.75) - quantile_sorted(col, 0.25);
    if (iqr > 0.0) any_positive = true;
    acc += iqr / 1.34;
  }
  if (!any_positive)
    throw degenerate_scale_error(
        "scale_estimate_U: interquartile range is zero in every dimension; "
        "supply the scale U explicitly");
  return acc / d;
}

}  // namespace regmix
