#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "demand/config.hpp"
#include "demand/distribution.hpp"

namespace demand {

// Sample-mean estimate of E(X - p)_+ with its standard error. Reproducible:
// the same (seed, n) always yields the same draws.
struct SurplusEstimate {
  double value = 0.0;
  double standard_error = 0.0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
};

// Requires n >= 1000 so the standard error is meaningful.
SurplusEstimate estimate_surplus(const DemandDistribution& d, double p,
                                 std::size_t n, std::uint64_t seed,
                                 const NumericConfig& cfg = {});

// Compares analytic expected revenue p * E(X - p)_+ against its Monte-Carlo
// estimate; pass means the z-score stays within 4 standard errors.
struct RevenueCheck {
  double p = 0.0;
  double analytic = 0.0;
  double mc = 0.0;
  double standard_error = 0.0;
  double z = 0.0;
  bool pass = false;
};

RevenueCheck validate_revenue(const DemandDistribution& d, double p,
                              std::size_t n, std::uint64_t seed,
                              const NumericConfig& cfg = {});

// Residual |S'(p) - (-survival(p))| of the central finite difference of
// S(p) = E(X - p)_+ at step h. The difference quotient is computed as a
// single integral of the survival function over [p-h, p+h], which shares the
// base value and avoids catastrophic cancellation. Throws StepTooSmall when
// the window's mass is below 100 machine epsilons of S(p - h), and
// DomainError unless 0 < p - h and p + h < H for finite H.
double finite_difference_lemma1(const DemandDistribution& d, double p,
                                double h, const NumericConfig& cfg = {});

// One JSON line: {"check":"revenue","p":...,"analytic":...,"mc":...,
// "stderr":...,"z":...,"pass":...} (no trailing newline).
std::string revenue_check_json_line(const RevenueCheck& c);

}  // namespace demand
