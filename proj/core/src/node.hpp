#pragma once

// Internal implementation hierarchy behind DemandDistribution. Each node is
// an immutable description of one distribution (a closed-form family or a
// combinator over child nodes). Public code never sees these types directly.

#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "demand/config.hpp"
#include "demand/quadrature.hpp"
#include "rng.hpp"

namespace demand::detail {

// Maps the shared numeric configuration onto one integration call's options.
quad::Options quad_options(const NumericConfig& cfg);

class DistNode {
 public:
  virtual ~DistNode() = default;

  DistNode() = default;
  DistNode(const DistNode&) = delete;
  DistNode& operator=(const DistNode&) = delete;

  // P(X > x), defined for every real x: 1 below the support, 0 at or past a
  // finite upper end.
  virtual double survival(double x) const = 0;

  virtual bool has_density() const noexcept = 0;

  // Density f(x); throws MissingDensity unless has_density().
  virtual double density(double x) const;

  virtual double lower() const noexcept = 0;  // support lower endpoint L
  virtual double upper() const noexcept = 0;  // support upper endpoint H (may be +inf)

  virtual std::string describe() const = 0;

  // T(x) = integral of survival over [x, +inf). For x below the support this
  // is (L - x) + T(L) since survival is identically 1 there. The default
  // integrates numerically with the absolute tolerance scaled by survival(x)
  // (deep in a tail the integral itself is tiny; a fixed absolute floor would
  // swamp it). Families override with closed forms.
  virtual double tail(double x, const NumericConfig& cfg) const;

  // Smallest x with F(x) >= q, for q in [0, 1). The default brackets the
  // survival function and bisects; families override with closed forms.
  virtual double quantile(double q, const NumericConfig& cfg) const;

  // One random draw. The default is inverse-CDF via quantile(); combinators
  // override with structural sampling (component pick, summation, mapping),
  // which is identical in distribution and consumes the generator in a fixed
  // order.
  virtual double draw(Rng& rng, const NumericConfig& cfg) const;

  // Abscissae where survival/density may have kinks (support endpoints of
  // the pieces). Used to seed quadrature subdivisions.
  virtual void collect_breakpoints(std::vector<double>& out) const;

  // E[X] = L + T(L), computed once and cached (the value is insensitive to
  // the configuration well beyond its own tolerance).
  double mean(const NumericConfig& cfg) const;

 private:
  mutable std::once_flag mean_once_;
  mutable double mean_value_ = 0.0;
};

using NodePtr = std::shared_ptr<const DistNode>;

}  // namespace demand::detail
