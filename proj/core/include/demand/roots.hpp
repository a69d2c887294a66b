#pragma once

#include <cstddef>
#include <functional>

namespace demand::roots {

// Bisection on a bracketing interval [lo, hi] with f(lo) and f(hi) of
// opposite sign (either may be exactly zero, in which case that endpoint is
// returned). Converges to |hi - lo| <= tol * max(1, |mid|). Throws
// BracketError when the endpoint signs do not bracket a root.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double f_lo, double f_hi, double tol,
              std::size_t max_iter = 256);

// Convenience overload that evaluates the endpoints itself.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double tol, std::size_t max_iter = 256);

}  // namespace demand::roots
