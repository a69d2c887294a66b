#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "demand/distribution.hpp"

namespace demand {

namespace families {

// Uniform on [lo, hi); requires 0 <= lo < hi.
DemandDistribution uniform(double lo, double hi);

// Exponential with the given rate (> 0); support [0, inf).
DemandDistribution exponential(double rate);

// Pareto (type I): survival (x / lower)^(-k) for x >= lower.
// Requires lower > 0 and k > 1 (finite mean).
DemandDistribution pareto1(double lower, double shape);

// Lomax / Pareto type II shifted to start at `location`:
// survival (scale / (x - location + scale))^k for x >= location.
// Requires location >= 0, scale > 0, k > 1.
DemandDistribution lomax(double location, double scale, double shape);

// Birnbaum–Saunders with shape a and scale beta (both > 0); support (0, inf).
DemandDistribution birnbaum_saunders(double shape, double scale);

// Log-logistic with shape k and scale s: survival 1 / (1 + (x/s)^k).
// Requires k > 1 (finite mean) and s > 0.
DemandDistribution loglogistic(double shape, double scale);

// Weibull: survival exp(-(x/s)^c); shape c > 0, scale s > 0.
DemandDistribution weibull(double shape, double scale);

// Gamma with shape a > 0 and scale s > 0.
DemandDistribution gamma(double shape, double scale);

}  // namespace families

// Construction by family name with named parameters, as used by the JSON
// spec layer and the CLI. Unknown names, missing parameters, spurious
// parameters, and out-of-range values all raise InvalidParameter.
DemandDistribution make_family(const std::string& name,
                               const std::map<std::string, double>& params);

// Canonical (name, ordered parameter keys) for every supported family, in a
// stable listing order. Serialization emits parameters in this order.
const std::vector<std::pair<std::string, std::vector<std::string>>>&
family_registry();

}  // namespace demand
