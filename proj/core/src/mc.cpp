#include "demand/mc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <json.hpp>

#include "demand/errors.hpp"
#include "demand/quadrature.hpp"
#include "demand/reliability.hpp"
#include "node.hpp"

namespace demand {

SurplusEstimate estimate_surplus(const DemandDistribution& d, double p,
                                 std::size_t n, std::uint64_t seed,
                                 const NumericConfig& cfg) {
  cfg.validate();
  if (n < 1000) {
    throw InvalidParameter("surplus estimation needs at least 1000 draws");
  }
  if (!(p >= 0.0) || !std::isfinite(p)) {
    throw DomainError("price must be finite and nonnegative");
  }
  const std::vector<double> draws = d.sample(seed, n, cfg);
  double sum = 0.0, sum_sq = 0.0;
  for (double x : draws) {
    const double v = x > p ? x - p : 0.0;
    sum += v;
    sum_sq += v * v;
  }
  const double count = static_cast<double>(n);
  SurplusEstimate out;
  out.n = n;
  out.seed = seed;
  out.value = sum / count;
  const double var =
      std::max(0.0, (sum_sq - count * out.value * out.value) / (count - 1.0));
  out.standard_error = std::sqrt(var / count);
  return out;
}

RevenueCheck validate_revenue(const DemandDistribution& d, double p,
                              std::size_t n, std::uint64_t seed,
                              const NumericConfig& cfg) {
  RevenueCheck out;
  out.p = p;
  out.analytic = expected_revenue(d, p, cfg);
  const SurplusEstimate est = estimate_surplus(d, p, n, seed, cfg);
  out.mc = p * est.value;
  out.standard_error = p * est.standard_error;
  const double diff = out.mc - out.analytic;
  if (out.standard_error > 0.0) {
    out.z = diff / out.standard_error;
  } else {
    out.z = diff == 0.0 ? 0.0 : diff / 1e-300;
  }
  out.pass = std::abs(out.z) <= 4.0;
  return out;
}

double finite_difference_lemma1(const DemandDistribution& d, double p,
                                double h, const NumericConfig& cfg) {
  cfg.validate();
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw InvalidParameter("step h must be finite and positive");
  }
  if (!(p - h > 0.0)) {
    throw DomainError("need 0 < p - h for a central difference");
  }
  const double upper = d.support_upper();
  if (std::isfinite(upper) && !(p + h < upper)) {
    throw DomainError("need p + h inside the support for a central "
                      "difference");
  }

  const double base = d.tail_integral(p - h, cfg);

  // [S(p+h) - S(p-h)] / (2h) = -(1/2h) * integral of survival over
  // [p-h, p+h]: one quadrature, no subtraction of near-equal tails.
  quad::Options opts;
  opts.abs_tol = std::max(2.0 * h * d.survival(p) * 1e-12, 1e-300);
  opts.rel_tol = 1e-12;
  std::vector<double> raw_breaks;
  d.node().collect_breakpoints(raw_breaks);
  std::vector<double> breaks;
  for (double b : raw_breaks) {
    if (b > p - h && b < p + h) breaks.push_back(b);
  }
  const double window = quad::integrate(
      [&](double u) { return d.survival(u); }, p - h, p + h, opts, breaks);

  constexpr double kEps = std::numeric_limits<double>::epsilon();
  if (window <= 100.0 * kEps * base) {
    throw StepTooSmall(
        "the difference window carries no mass relative to S(p - h); "
        "increase h");
  }
  return std::abs(d.survival(p) - window / (2.0 * h));
}

std::string revenue_check_json_line(const RevenueCheck& c) {
  nlohmann::ordered_json j;
  j["check"] = "revenue";
  j["p"] = c.p;
  j["analytic"] = c.analytic;
  j["mc"] = c.mc;
  j["stderr"] = c.standard_error;
  j["z"] = c.z;
  j["pass"] = c.pass;
  return j.dump();
}

}  // namespace demand
