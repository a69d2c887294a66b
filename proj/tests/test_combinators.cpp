#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include <doctest.h>

#include "corpus.hpp"
#include "demand/combinators.hpp"
#include "demand/errors.hpp"
#include "demand/families.hpp"
#include "oracle.hpp"

using demand::DemandDistribution;
namespace fam = demand::families;

TEST_CASE("mixture survival and density are exactly linear in the weights") {
  const auto u12 = fam::uniform(1.0, 2.0);
  const auto u34 = fam::uniform(3.0, 4.0);
  const auto mix = demand::mixture({u12, u34}, {0.25, 0.75});
  for (int i = 0; i <= 100; ++i) {
    const double x = 5.0 * static_cast<double>(i) / 100.0;
    const double want_s = 0.25 * u12.survival(x) + 0.75 * u34.survival(x);
    CHECK(std::abs(mix.survival(x) - want_s) <= 1e-15);
    const double want_f = 0.25 * u12.density(x) + 0.75 * u34.density(x);
    CHECK(std::abs(mix.density(x) - want_f) <= 1e-15);
  }
  CHECK(std::abs(mix.mean() - 3.0) < 1e-9);
  CHECK(mix.support_lower() == 1.0);
  CHECK(mix.support_upper() == 4.0);
}

TEST_CASE("mixture argument validation") {
  const auto u = fam::uniform(0.0, 1.0);
  CHECK_THROWS_AS(demand::mixture({u, u}, {0.5, 0.6}),
                  demand::InvalidParameter);
  CHECK_THROWS_AS(demand::mixture({u, u}, {1.5, -0.5}),
                  demand::InvalidParameter);
  CHECK_THROWS_AS(demand::mixture({u, u}, {1.0}), demand::InvalidParameter);
  CHECK_THROWS_AS(demand::mixture({}, {}), demand::InvalidParameter);
}

TEST_CASE("scaling rescales every statistic by the factor") {
  const auto e = fam::exponential(1.0);
  const auto s = demand::scale(e, 2.0);
  for (double x : {0.1, 0.5, 1.0, 3.0, 10.0}) {
    CHECK(std::abs(s.survival(x) - std::exp(-x / 2.0)) < 1e-14);
    CHECK(std::abs(s.density(x) - 0.5 * std::exp(-x / 2.0)) < 1e-14);
  }
  CHECK(std::abs(s.mean() - 2.0) < 1e-10);
  CHECK(std::abs(s.quantile(0.5) - 2.0 * e.quantile(0.5)) < 1e-10);
  CHECK(std::abs(s.tail_integral(2.0) - 2.0 * e.tail_integral(1.0)) < 1e-9);
  CHECK_THROWS_AS(demand::scale(e, 0.0), demand::InvalidParameter);
  CHECK_THROWS_AS(demand::scale(e, -1.0), demand::InvalidParameter);
}

TEST_CASE("scaling agrees with the equivalent monotone transform") {
  const auto base = fam::weibull(2.0, 1.0);
  const double lambda = 2.5;
  const auto s = demand::scale(base, lambda);
  const auto t = demand::monotone_transform(
      base, [lambda](double x) { return lambda * x; },
      [lambda](double y) { return y / lambda; },
      [lambda](double) { return lambda; }, "linear");
  for (int i = 1; i <= 50; ++i) {
    const double x = 0.1 * static_cast<double>(i);
    CHECK(std::abs(s.survival(x) - t.survival(x)) <= 1e-10);
    CHECK(std::abs(s.density(x) - t.density(x)) <= 1e-10);
  }
  CHECK(std::abs(s.quantile(0.7) - t.quantile(0.7)) <= 1e-8);
}

TEST_CASE("shifting matches the family with a built-in location") {
  const auto moved = demand::shift(fam::lomax(0.0, 1.0, 3.0), 2.0);
  const auto direct = fam::lomax(2.0, 1.0, 3.0);
  for (double x : {1.0, 2.0, 2.5, 4.0, 10.0}) {
    CHECK(std::abs(moved.survival(x) - direct.survival(x)) < 1e-14);
  }
  CHECK(std::abs(moved.density(3.0) - direct.density(3.0)) < 1e-14);
  CHECK(std::abs(moved.mean() - 2.5) < 1e-9);
  CHECK(std::abs(moved.quantile(0.875) - 3.0) < 1e-9);
  CHECK(moved.support_lower() == 2.0);
  // Support may not be pushed below zero: prices are nonnegative.
  CHECK_THROWS_AS(demand::shift(fam::uniform(0.0, 1.0), -0.5),
                  demand::InvalidParameter);
}

TEST_CASE("left truncation renormalizes the upper tail") {
  const auto d = demand::left_truncate(fam::pareto1(1.0, 3.0), 2.0);
  CHECK(d.support_lower() == 2.0);
  CHECK(d.survival(1.5) == 1.0);
  CHECK(std::abs(d.survival(3.0) - 8.0 / 27.0) < 1e-14);
  CHECK(std::abs(d.tail_integral(2.0) - 1.0) < 1e-9);
  CHECK(std::abs(d.quantile(0.875) - 4.0) < 1e-9);
  CHECK(std::abs(d.mean() - 3.0) < 1e-9);
  CHECK(std::abs(d.density(3.0) - fam::pareto1(1.0, 3.0).density(3.0) / 0.125) <
        1e-12);
  CHECK_THROWS_AS(demand::left_truncate(fam::uniform(0.0, 1.0), 1.5),
                  demand::InvalidParameter);
  CHECK_THROWS_AS(demand::left_truncate(fam::uniform(0.0, 1.0), -0.5),
                  demand::InvalidParameter);
}

TEST_CASE("monotone transform: closed-form square root of an exponential") {
  const auto e = fam::exponential(1.0);
  const auto r = demand::monotone_transform(
      e, [](double x) { return std::sqrt(x); },
      [](double y) { return y * y; }, [](double x) { return 0.5 / std::sqrt(x); },
      "sqrt");
  for (double y : {0.25, 0.5, 1.0, 2.0}) {
    CHECK(std::abs(r.survival(y) - std::exp(-y * y)) < 1e-12);
    // f_Y(y) = f_X(y^2) * 2y
    CHECK(std::abs(r.density(y) - std::exp(-y * y) * 2.0 * y) < 1e-10);
  }
  CHECK(std::abs(r.quantile(0.5) - std::sqrt(std::log(2.0))) < 1e-8);
}

TEST_CASE("monotone transform rejects a mismatched inverse") {
  const auto e = fam::exponential(1.0);
  CHECK_THROWS_AS(
      [&] {
        const auto broken = demand::monotone_transform(
            e, [](double x) { return std::sqrt(x); },
            [](double y) { return y; });
        (void)broken.survival(4.0);
        (void)broken.quantile(0.9);
      }(),
      demand::InverseMismatch);
}

TEST_CASE("power transform equals the explicit root transform") {
  const auto e = fam::exponential(1.0);
  const auto p = demand::power_transform(e, 0.5);
  for (double y : {0.25, 0.5, 1.0, 2.0}) {
    CHECK(std::abs(p.survival(y) - std::exp(-y * y)) < 1e-12);
  }
  CHECK_THROWS_AS(demand::power_transform(e, 0.0), demand::InvalidParameter);
  CHECK_THROWS_AS(demand::power_transform(e, -2.0), demand::InvalidParameter);
}

TEST_CASE("convolution of two unit exponentials is the rate-1 Erlang") {
  const auto conv = demand::convolve(fam::exponential(1.0), fam::exponential(1.0));
  for (double t : {0.5, 1.0, 2.0, 5.0}) {
    CHECK(std::abs(conv.survival(t) - (1.0 + t) * std::exp(-t)) < 1e-8);
  }
  CHECK(std::abs(conv.survival(1.0) - 2.0 * std::exp(-1.0)) < 1e-8);
  // integral of (1+t)e^{-t} from x is (2+x)e^{-x}
  CHECK(std::abs(conv.tail_integral(1.0) - 3.0 * std::exp(-1.0)) < 1e-6);
  CHECK(std::abs(conv.mean() - 2.0) < 1e-8);
  CHECK_FALSE(conv.has_density());
  CHECK_THROWS_AS(conv.density(1.0), demand::MissingDensity);
}

TEST_CASE("convolving with a near-point mass is numerically the identity") {
  const auto base = fam::pareto1(1.0, 3.0);
  const auto conv = demand::convolve(base, fam::uniform(0.0, 1e-9));
  for (double x : {1.2, 2.0, 5.0}) {
    CHECK(std::abs(conv.survival(x) - base.survival(x)) < 1e-6);
  }
}

TEST_CASE("convolution needs a density on its first argument") {
  const auto conv = demand::convolve(fam::exponential(1.0), fam::exponential(1.0));
  CHECK_THROWS_AS(demand::convolve(conv, fam::exponential(1.0)),
                  demand::MissingDensity);
}

TEST_CASE("convolution survival matches a brute-force simulation") {
  // Sum of two loglogistic(2,1) draws; survival at 2 checked against an
  // inverse-cdf simulation with its own generator.
  const auto conv =
      demand::convolve(fam::loglogistic(2.0, 1.0), fam::loglogistic(2.0, 1.0));
  const double s2 = conv.survival(2.0);

  std::mt19937_64 rng(20240817u);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const std::size_t n = 10'000'000;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double u1 = unif(rng);
    const double u2 = unif(rng);
    const double x1 = std::sqrt(u1 / (1.0 - u1));
    const double x2 = std::sqrt(u2 / (1.0 - u2));
    if (x1 + x2 > 2.0) ++hits;
  }
  const double p_hat = static_cast<double>(hits) / static_cast<double>(n);
  const double se = std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(n));
  CHECK(std::abs(s2 - p_hat) <= 3.0 * se);
}

TEST_CASE("combinator sampling is deterministic") {
  const auto conv = demand::convolve(fam::exponential(1.0), fam::exponential(1.0));
  const auto a = conv.sample(11, 2000);
  const auto b = conv.sample(11, 2000);
  CHECK(a == b);
  double sum = 0.0;
  for (double x : a) {
    CHECK(x >= 0.0);
    sum += x;
  }
  // mean 2, sd sqrt(2/2000) ~ 0.032; allow 5 sigma
  CHECK(std::abs(sum / 2000.0 - 2.0) < 0.16);
}
