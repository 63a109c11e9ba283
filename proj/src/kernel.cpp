#include "regmix/kernel.hpp"

#include <cstdlib>
#include <mutex>
#include <set>
#include <stdexcept>
#include <string>

namespace regmix {

namespace {

// Midpoint-rule mass of v(|x|^2) over [-12,12]^d; the tail beyond that box is
// far below the 1e-6 check tolerance.
double quadrature_mass(const KernelProfile& p, int dim) {
  const int m = dim == 3 ? 97 : 601;
  const double lo = -12.0, hi = 12.0;
  const double step = (hi - lo) / m;
  auto node = [&](int i) { return lo + (i + 0.5) * step; };
  double sum = 0.0;
  if (dim == 1) {
    for (int i = 0; i < m; ++i) sum += p.v(node(i) * node(i));
  } else if (dim == 2) {
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        sum += p.v(node(i) * node(i) + node(j) * node(j));
  } else {
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k)
          sum += p.v(node(i) * node(i) + node(j) * node(j) + node(k) * node(k));
  }
  double vol = 1.0;
  for (int d = 0; d < dim; ++d) vol *= step;
  return sum * vol;
}

void verify_normalization(const KernelProfile& p, int dim) {
  static std::mutex mu;
  static std::set<int> verified;
  if (dim > 3) return;
  std::lock_guard<std::mutex> lock(mu);
  if (verified.count(dim)) return;
  double mass = quadrature_mass(p, dim);
  if (std::abs(mass - 1.0) > 1e-6)
    throw std::logic_error("kernel profile mass " + std::to_string(mass) +
                           " != 1 for dim " + std::to_string(dim));
  verified.insert(dim);
}

}  // namespace

KernelProfile::KernelProfile(int dim) : dim_(dim) {
  if (dim < 1) throw std::invalid_argument("kernel dimension must be >= 1");
  static const double kLog2Pi = std::log(2.0 * M_PI);
  log_norm_ = -0.5 * dim * kLog2Pi;
  norm_ = std::exp(log_norm_);
  roughness_ = std::exp(-0.5 * dim * std::log(4.0 * M_PI));
}

KernelProfile KernelProfile::gaussian(int dim) {
  KernelProfile p(dim);
  verify_normalization(p, dim);
  return p;
}

KernelProfile gaussian_profile(int dim) { return KernelProfile::gaussian(dim); }

}  // namespace regmix
