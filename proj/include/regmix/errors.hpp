#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace regmix {

/// A mixture likelihood vanished for one observation: every kernel/grid
/// contribution underflowed to zero, so no posterior can be formed.
class normalization_error : public std::runtime_error {
 public:
  normalization_error(std::int64_t observation, const std::string& what)
      : std::runtime_error(what), observation_(observation) {}
  std::int64_t observation() const { return observation_; }

 private:
  std::int64_t observation_;
};

/// Non-finite integrand value at a quadrature node.
class quadrature_error : public std::runtime_error {
 public:
  quadrature_error(std::int64_t node, const std::string& what)
      : std::runtime_error(what), node_(node) {}
  std::int64_t node() const { return node_; }

 private:
  std::int64_t node_;
};

/// The interquartile range vanished in every dimension, so no data-driven
/// scale exists; the caller has to supply one.
class degenerate_scale_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace regmix
