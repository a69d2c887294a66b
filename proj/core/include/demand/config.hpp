#pragma once

#include <cstddef>

namespace demand {

// Numerical knobs shared across the library. Every routine that integrates,
// inverts, probes tails, or lays grids takes one of these; the defaults are
// the contract values that the test suite and the CLI rely on.
struct NumericConfig {
  // Adaptive quadrature targets. An integral is accepted when its error
  // estimate is below abs_tol + rel_tol * |value|.
  double quad_abs_tol = 1e-10;
  double quad_rel_tol = 1e-8;

  // Relative slack when judging whether a sampled curve is monotone:
  // a step counts as a rise/fall only when it exceeds
  // mono_slack * max(|a|, |b|, 1).
  double mono_slack = 1e-7;

  // Number of points in the standard evaluation grid.
  std::size_t grid_points = 512;

  // Absolute tolerance for root refinement (fixed points, quantiles).
  double root_tol = 1e-10;

  // Tail-limit estimation: probe prices double up to this many times.
  std::size_t tail_probe_max_doublings = 40;

  // Tail-limit estimation: the trailing probe values must agree to this
  // relative tolerance to declare convergence.
  double tail_agree_tol = 1e-4;

  // Throws InvalidParameter when any field is out of range.
  void validate() const;
};

}  // namespace demand
