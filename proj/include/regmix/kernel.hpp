#pragma once

#include <cmath>

namespace regmix {

/// Radial profile of a spherically symmetric kernel V on R^d, V(x) = v(|x|^2).
/// v carries the normalization, so V is a probability density; w = -v' is the
/// weight function driving mean-shift style updates.
class KernelProfile {
 public:
  static KernelProfile gaussian(int dim);

  int dim() const { return dim_; }
  bool is_gaussian() const { return true; }  // only kernel currently provided

  double v(double t) const { return norm_ * std::exp(-0.5 * t); }
  double log_v(double t) const { return log_norm_ - 0.5 * t; }
  double w(double t) const { return 0.5 * v(t); }        // -v'
  double log_w(double t) const { return log_v(t) - kLogTwo; }
  double v_second(double t) const { return 0.25 * v(t); }  // v'', for Hessians

  /// Roughness R(V) = integral of V^2.
  double roughness() const { return roughness_; }
  /// sup_t v(t), attained at t = 0.
  double v_max() const { return norm_; }

 private:
  explicit KernelProfile(int dim);

  static constexpr double kLogTwo = 0.6931471805599453;
  int dim_;
  double norm_;      // (2*pi)^(-d/2)
  double log_norm_;
  double roughness_;
};

/// Normalized Gaussian profile: v(t) = (2*pi)^(-d/2) exp(-t/2), w = v/2,
/// R(V) = (4*pi)^(-d/2). Normalization is verified by quadrature once per
/// dimension for d <= 3.
KernelProfile gaussian_profile(int dim);

}  // namespace regmix
