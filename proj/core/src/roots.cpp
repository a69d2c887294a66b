#include "demand/roots.hpp"

#include <cmath>

#include "demand/errors.hpp"

namespace demand::roots {

double bisect(const std::function<double(double)>& f, double lo, double hi,
              double f_lo, double f_hi, double tol, std::size_t max_iter) {
  if (!(lo <= hi)) {
    throw BracketError("bisect: reversed bracket");
  }
  if (f_lo == 0.0) {
    return lo;
  }
  if (f_hi == 0.0) {
    return hi;
  }
  if ((f_lo > 0.0) == (f_hi > 0.0)) {
    throw BracketError("bisect: endpoints do not change sign");
  }

  for (std::size_t i = 0; i < max_iter; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) {
      break;  // interval at floating-point resolution
    }
    if (hi - lo <= tol * std::max(1.0, std::fabs(mid))) {
      break;
    }
    const double f_mid = f(mid);
    if (f_mid == 0.0) {
      return mid;
    }
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
      f_hi = f_mid;
    }
  }
  return 0.5 * (lo + hi);
}

double bisect(const std::function<double(double)>& f, double lo, double hi,
              double tol, std::size_t max_iter) {
  return bisect(f, lo, hi, f(lo), f(hi), tol, max_iter);
}

}  // namespace demand::roots
