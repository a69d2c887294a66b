#include <cmath>
#include <limits>

#include <doctest.h>

#include "demand/config.hpp"
#include "demand/errors.hpp"
#include "demand/quadrature.hpp"
#include "demand/roots.hpp"

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("finite integration is exact on low-degree polynomials") {
  demand::quad::Options opts;
  const double v =
      demand::quad::integrate([](double x) { return x * x * x; }, 0.0, 1.0, opts);
  CHECK(std::abs(v - 0.25) < 1e-14);

  const double w = demand::quad::integrate(
      [](double x) { return 3.0 * x * x - 2.0 * x + 1.0; }, -1.0, 2.0, opts);
  // antiderivative x^3 - x^2 + x: (8-4+2) - (-1-1-1) = 9
  CHECK(std::abs(w - 9.0) < 1e-12);
}

TEST_CASE("finite integration reaches tolerance on smooth transcendentals") {
  demand::quad::Options opts;
  opts.abs_tol = 1e-13;
  opts.rel_tol = 1e-13;
  const double v =
      demand::quad::integrate([](double x) { return std::exp(-x); }, 0.0, 10.0, opts);
  CHECK(std::abs(v - (1.0 - std::exp(-10.0))) < 1e-12);
}

TEST_CASE("breakpoints let the integrator handle interior kinks") {
  demand::quad::Options opts;
  opts.abs_tol = 1e-13;
  opts.rel_tol = 1e-13;
  const auto kink = [](double x) { return std::abs(x - 0.5); };
  const double v = demand::quad::integrate(kink, 0.0, 1.0, opts, {0.5});
  CHECK(std::abs(v - 0.25) < 1e-13);
}

TEST_CASE("upper-infinite integration handles exponential and power decay") {
  demand::quad::Options opts;
  const double e = demand::quad::integrate_upper(
      [](double x) { return std::exp(-x); }, 0.0, opts);
  CHECK(std::abs(e - 1.0) < 1e-9);

  const double p = demand::quad::integrate_upper(
      [](double x) { return 1.0 / (x * x * x); }, 1.0, opts);
  CHECK(std::abs(p - 0.5) < 1e-8);
}

TEST_CASE("upper-infinite integration flags a divergent integrand") {
  demand::quad::Options opts;
  CHECK_THROWS_AS(demand::quad::integrate_upper(
                      [](double x) { return 1.0 / x; }, 1.0, opts),
                  demand::DivergentIntegral);
  CHECK_THROWS_AS(demand::quad::integrate_upper(
                      [](double x) { return std::sqrt(x); }, 1.0, opts),
                  demand::DivergentIntegral);
}

TEST_CASE("non-finite integrand values raise a quadrature error") {
  demand::quad::Options opts;
  const auto bad = [](double x) {
    return x > 0.5 ? std::numeric_limits<double>::quiet_NaN() : 1.0;
  };
  CHECK_THROWS_AS(demand::quad::integrate(bad, 0.0, 1.0, opts),
                  demand::QuadratureError);
}

TEST_CASE("bisection refines a bracketed root") {
  const double r = demand::roots::bisect([](double x) { return std::cos(x); },
                                         0.0, 2.0, 1e-12);
  CHECK(std::abs(r - std::acos(0.0)) < 1e-10);
}

TEST_CASE("bisection rejects a same-sign bracket") {
  CHECK_THROWS_AS(demand::roots::bisect([](double x) { return x * x + 1.0; },
                                        -1.0, 1.0, 1e-10),
                  demand::BracketError);
}

TEST_CASE("configuration validation rejects out-of-range fields") {
  demand::NumericConfig good;
  CHECK_NOTHROW(good.validate());

  demand::NumericConfig bad_tol;
  bad_tol.quad_rel_tol = -1.0;
  CHECK_THROWS_AS(bad_tol.validate(), demand::InvalidParameter);

  demand::NumericConfig bad_grid;
  bad_grid.grid_points = 8;
  CHECK_THROWS_AS(bad_grid.validate(), demand::InvalidParameter);

  demand::NumericConfig bad_slack;
  bad_slack.mono_slack = 0.0;
  CHECK_THROWS_AS(bad_slack.validate(), demand::InvalidParameter);
}

TEST_CASE("options accept tight tolerances without stalling") {
  demand::quad::Options tight;
  tight.abs_tol = 1e-14;
  tight.rel_tol = 1e-12;
  const double v = demand::quad::integrate(
      [](double x) { return std::sin(x); }, 0.0, 3.141592653589793, tight);
  CHECK(std::abs(v - 2.0) < 1e-11);
  (void)kInf;
}
