#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace demand::quad {

// Tolerances and budgets for one integration call. An estimate is accepted
// when its error indicator drops below abs_tol + rel_tol * |value|.
struct Options {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  // Budget for adaptive subdivision on a finite interval.
  std::size_t max_intervals = 2048;
  // Budget for the geometric panel sweep on [a, +inf).
  std::size_t max_panels = 700;
};

// Adaptive Gauss–Kronrod (7/15) integration of f over the finite interval
// [a, b]. `breakpoints` lists interior abscissae where f may have kinks
// (support endpoints of mixture components and the like); they seed the
// initial subdivision so the error estimator never straddles a corner.
// Throws QuadratureError when the tolerance cannot be met.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const Options& opts,
                 const std::vector<double>& breakpoints = {});

// Integration of f over [a, +inf) for integrands that eventually decay.
// The half-line is swept with geometrically widening panels, each handled
// by the adaptive finite-interval rule; the sweep stops when the estimated
// remainder (from the inter-panel decay ratio) is below tolerance.
// `scale_hint`, when positive, sets the width of the first panel.
// Throws DivergentIntegral when contributions fail to decay (or the total
// overflows), QuadratureError when the sweep exhausts its budget without a
// verdict.
double integrate_upper(const std::function<double(double)>& f, double a,
                       const Options& opts,
                       const std::vector<double>& breakpoints = {},
                       double scale_hint = 0.0);

}  // namespace demand::quad
