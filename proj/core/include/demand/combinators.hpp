#pragma once

#include <functional>
#include <string>
#include <vector>

#include "demand/config.hpp"
#include "demand/distribution.hpp"

namespace demand {

// Convex combination: survival(x) = sum_i weights[i] * survival_i(x).
// Weights must be nonnegative and sum to 1 within 1e-12; components may
// overlap or be disjoint. The result carries a density iff every component
// does.
DemandDistribution mixture(const std::vector<DemandDistribution>& components,
                           const std::vector<double>& weights);

// The distribution of factor * X (factor > 0).
DemandDistribution scale(const DemandDistribution& d, double factor);

// The distribution of X + offset. The offset may be negative as long as the
// resulting support stays nonnegative.
DemandDistribution shift(const DemandDistribution& d, double offset);

// The conditional distribution of X given X >= at, for at strictly inside
// the support: survival_new(x) = survival(x) / survival(at) above `at`.
DemandDistribution left_truncate(const DemandDistribution& d, double at);

// The distribution of phi(X) for a strictly increasing phi on the support.
// The caller supplies the inverse (mandatory) and the derivative (optional;
// without it the result has no density). The construction spot-checks
// phi(phi_inv(y)) = y on a quantile grid and throws InverseMismatch on
// disagreement. When the support is unbounded, phi must be unbounded too.
DemandDistribution monotone_transform(
    const DemandDistribution& d, std::function<double(double)> phi,
    std::function<double(double)> phi_inv,
    std::function<double(double)> phi_deriv = nullptr,
    const std::string& name = "transform");

// The distribution of X^exponent for 0 < exponent <= 1 (the concave case);
// requires nonnegative support. Other exponents are rejected.
DemandDistribution power_transform(const DemandDistribution& d,
                                   double exponent);

// The distribution of X + Y for independent X ~ d1, Y ~ d2. Requires a
// density on d1 and nonnegative supports. The result exposes no density;
// its survival and tail integral are evaluated by quadrature configured by
// `cfg` (captured at construction — survival() takes no config argument).
DemandDistribution convolve(const DemandDistribution& d1,
                            const DemandDistribution& d2,
                            const NumericConfig& cfg = {});

}  // namespace demand
