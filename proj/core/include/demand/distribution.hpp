#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "demand/config.hpp"

namespace demand {

namespace detail {
class DistNode;
}

// Immutable value type describing the random demand level: a nonnegative
// continuous random variable with finite mean, exposed through its survival
// function, optional density, support endpoints, tail integral, quantiles,
// and deterministic sampling. Instances are created by the family
// constructors (families.hpp), the combinators (combinators.hpp), or from a
// JSON spec (dist_spec.hpp); copying is cheap (shared immutable state).
class DemandDistribution {
 public:
  // Wraps an implementation node. Intended for the library's own factory
  // functions; not useful to call directly.
  explicit DemandDistribution(std::shared_ptr<const detail::DistNode> node);

  // P(X > x), defined for all real x.
  double survival(double x) const;

  bool has_density() const noexcept;

  // f(x); throws MissingDensity when the distribution does not carry one
  // (convolutions, transforms without a derivative).
  double density(double x) const;

  double support_lower() const noexcept;
  double support_upper() const noexcept;  // +infinity when unbounded

  // Human-readable description of the construction.
  std::string label() const;

  // Integral of the survival function over [x, +inf); equals the expected
  // excess E (X - x)_+ . Throws DivergentIntegral when it fails to converge.
  double tail_integral(double x, const NumericConfig& cfg = {}) const;

  // E[X]; computed once per distribution and cached.
  double mean(const NumericConfig& cfg = {}) const;

  // Smallest x with F(x) >= q, for q in [0, 1).
  double quantile(double q, const NumericConfig& cfg = {}) const;

  // n i.i.d. draws, bitwise-deterministic for a given (seed, n): the same
  // seed always produces the same sequence, and the first n1 elements of
  // sample(seed, n2) equal sample(seed, n1) whenever n1 <= n2.
  std::vector<double> sample(std::uint64_t seed, std::size_t n,
                             const NumericConfig& cfg = {}) const;

  // Implementation access for the library's internals.
  const detail::DistNode& node() const noexcept { return *node_; }
  const std::shared_ptr<const detail::DistNode>& node_ptr() const noexcept {
    return node_;
  }

 private:
  std::shared_ptr<const detail::DistNode> node_;
};

}  // namespace demand
