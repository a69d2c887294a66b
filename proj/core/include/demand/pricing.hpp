#pragma once

#include <string>
#include <vector>

#include "demand/config.hpp"
#include "demand/distribution.hpp"

namespace demand {

// An interval on which m(p) = p identically (equivalently survival(p) * p^2
// is constant there). `upper` may be +infinity.
struct Ray {
  double lower = 0.0;
  double upper = 0.0;
};

struct FixedPointScan {
  std::vector<double> points;  // isolated solutions of m(p) = p
  std::vector<Ray> rays;
};

// Scans phi(p) = m(p) - p for sign changes over a log-spaced price grid whose
// upper end grows by doubling until l(p) < 1 - tol or survival underflows,
// refines each bracket by bisection to |phi| <= 1e-10 * max(1, p), and
// separates out ray intervals where phi vanishes identically.
FixedPointScan find_fixed_points(const DemandDistribution& d,
                                 const NumericConfig& cfg = {});

// p1 = sup{p >= 0 : l(p) >= 1}; +infinity when l stays >= 1 out to the
// numerical horizon.
double compute_p1(const DemandDistribution& d, const NumericConfig& cfg = {});

// How strongly the solver can vouch that the reported optimum is the unique
// revenue maximizer.
enum class Certificate {
  kDgmrdStrict,    // l strictly decreasing on the grid and p1 < inf
  kDgmrdWeakSafe,  // l weakly decreasing, p1 < inf, and no ray detected
  kNotCertified,
};

struct PricingSolution {
  std::vector<double> fixed_points;
  std::vector<Ray> rays;
  double p1 = 0.0;  // +infinity allowed
  Certificate certificate = Certificate::kNotCertified;
  std::string certificate_reason;
  // False when expected revenue is still rising at the numerical horizon
  // (survival below 1e-12), i.e. no finite maximizer exists.
  bool finite_maximizer = true;
  double optimal_price = 0.0;          // valid when finite_maximizer
  double optimal_revenue = 0.0;        // valid when finite_maximizer
  double elasticity_at_optimum = 0.0;  // valid when finite_maximizer
};

// Solves max_p R(p) = p * m(p) * survival(p). Under a certificate the unique
// fixed point of m is the optimum; otherwise the best of the fixed points,
// ray endpoints, and the refined grid argmax is reported, or the solution is
// flagged as having no finite maximizer.
PricingSolution solve(const DemandDistribution& d,
                      const NumericConfig& cfg = {});

// JSON with fields fixed_points, rays (upper end "inf" when unbounded), p1
// (number or "inf"), certificate, optimal_price (number or "none"),
// optimal_revenue, elasticity_at_optimum. indent < 0 renders compactly.
std::string pricing_json(const PricingSolution& s, int indent = 2);

}  // namespace demand
