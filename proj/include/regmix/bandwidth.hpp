#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "regmix/kernel.hpp"

namespace regmix {

/// Maximal-smoothing bandwidth
///   h = U * [ (d+8)^((d+6)/2) pi^(d/2) R(V) / (16 n Gamma((d+8)/2) d (d+2)) ]^(1/(d+4)).
/// Oversmooths on purpose: sacrifices some bias to suppress spurious modes.
double oversmooth_bandwidth(std::int64_t n, int dim, double scale_u,
                            const KernelProfile& profile);

/// Data-driven scale for the bandwidth rule: per dimension the Gaussian-scaled
/// interquartile range IQR/1.34 (linearly interpolated quantiles), averaged
/// over dimensions. Degenerate dimensions contribute zero; if every dimension
/// is degenerate a degenerate_scale_error asks the caller for an explicit U.
double scale_estimate_U(const Eigen::MatrixXd& sample);

}  // namespace regmix
