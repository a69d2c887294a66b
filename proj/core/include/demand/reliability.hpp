#pragma once

#include <string>
#include <vector>

#include "demand/config.hpp"
#include "demand/distribution.hpp"

namespace demand {

// Mean residual demand m(p) = E[X - p | X > p]: the tail integral of the
// survival function divided by survival at p. Returns 0 for p at or past a
// finite support end. Throws BeyondNumericalSupport when survival(p) has
// underflowed (< 1e-300), DomainError for p < 0.
double mrd(const DemandDistribution& d, double p,
           const NumericConfig& cfg = {});

// Generalized MRD l(p) = m(p) / p, the reciprocal of the elasticity of
// expected demand. Requires 0 < p < H.
double gmrd(const DemandDistribution& d, double p,
            const NumericConfig& cfg = {});

// Hazard rate h(p) = f(p) / survival(p). Requires a density and L < p < H.
double hazard(const DemandDistribution& d, double p,
              const NumericConfig& cfg = {});

// Generalized failure rate g(p) = p * h(p).
double gfr(const DemandDistribution& d, double p,
           const NumericConfig& cfg = {});

// Price elasticity of expected demand, 1 / l(p). Requires 0 < p < H.
double elasticity(const DemandDistribution& d, double p,
                  const NumericConfig& cfg = {});

// Expected revenue R(p) = p * E(X - p)_+ = p * m(p) * survival(p).
// Degenerates to 0 gracefully for p past the support or deep in a tail.
double expected_revenue(const DemandDistribution& d, double p,
                        const NumericConfig& cfg = {});

// m'(p) via the identity m'(p) = h(p) m(p) - 1. Requires a density.
double mrd_derivative(const DemandDistribution& d, double p,
                      const NumericConfig& cfg = {});

// Batch evaluation of every function over a price grid. A NaN entry marks a
// value that is missing at that point (no density for h/g, or a numerical
// guard tripped). All vectors share the grid's length.
struct ReliabilityCurves {
  std::vector<double> grid;
  std::vector<double> m_values;
  std::vector<double> l_values;
  std::vector<double> h_values;
  std::vector<double> g_values;
  std::vector<double> eps_values;
  std::vector<double> r_values;
};

// The evaluation grid: spans [quantile(0.001), quantile(0.999)] clipped to
// (0, H), with cfg.grid_points points, log-spaced for unbounded support and
// linear otherwise.
std::vector<double> standard_grid(const DemandDistribution& d,
                                  const NumericConfig& cfg = {});

ReliabilityCurves curves(const DemandDistribution& d,
                         const NumericConfig& cfg = {});

// CSV with header `p,m,l,h,g,eps,R`, one row per grid point, 17 significant
// digits, missing values as empty fields.
std::string curves_csv(const ReliabilityCurves& c);

}  // namespace demand
