#include "demand/reliability.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <vector>

#include "demand/errors.hpp"

namespace demand {

namespace {

constexpr double kSurvivalFloor = 1e-300;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_price_nonnegative(double p) {
  if (!(p >= 0.0) || !std::isfinite(p)) {
    throw DomainError("price must be finite and nonnegative");
  }
}

void check_price_interior(double p, double upper) {
  if (!(p > 0.0) || !std::isfinite(p)) {
    throw DomainError("price must be finite and positive");
  }
  if (p >= upper) {
    throw DomainError("price is at or past the support's upper end");
  }
}

void append_cell(std::string& out, double v) {
  if (std::isnan(v)) return;  // missing -> empty field
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

}  // namespace

double mrd(const DemandDistribution& d, double p, const NumericConfig& cfg) {
  cfg.validate();
  check_price_nonnegative(p);
  if (p >= d.support_upper()) return 0.0;
  const double sbar = d.survival(p);
  if (sbar < kSurvivalFloor) {
    throw BeyondNumericalSupport(
        "survival underflowed below 1e-300; mean residual demand is beyond "
        "numerical support at this price");
  }
  return d.tail_integral(p, cfg) / sbar;
}

double gmrd(const DemandDistribution& d, double p, const NumericConfig& cfg) {
  cfg.validate();
  check_price_interior(p, d.support_upper());
  return mrd(d, p, cfg) / p;
}

double hazard(const DemandDistribution& d, double p, const NumericConfig& cfg) {
  cfg.validate();
  if (!d.has_density()) {
    throw MissingDensity("hazard rate requires a density");
  }
  if (!(p > d.support_lower())) {
    throw DomainError("hazard rate requires a price above the support's "
                      "lower end");
  }
  check_price_interior(p, d.support_upper());
  const double sbar = d.survival(p);
  if (sbar < kSurvivalFloor) {
    throw BeyondNumericalSupport(
        "survival underflowed below 1e-300; hazard rate is beyond numerical "
        "support at this price");
  }
  return d.density(p) / sbar;
}

double gfr(const DemandDistribution& d, double p, const NumericConfig& cfg) {
  return p * hazard(d, p, cfg);
}

double elasticity(const DemandDistribution& d, double p,
                  const NumericConfig& cfg) {
  return 1.0 / gmrd(d, p, cfg);
}

double expected_revenue(const DemandDistribution& d, double p,
                        const NumericConfig& cfg) {
  cfg.validate();
  check_price_nonnegative(p);
  if (p == 0.0 || p >= d.support_upper()) return 0.0;
  // p * m(p) * survival(p) == p * tail_integral(p); the latter avoids the
  // survival division and degrades smoothly to 0 deep in the tail.
  return p * d.tail_integral(p, cfg);
}

double mrd_derivative(const DemandDistribution& d, double p,
                      const NumericConfig& cfg) {
  return hazard(d, p, cfg) * mrd(d, p, cfg) - 1.0;
}

std::vector<double> standard_grid(const DemandDistribution& d,
                                  const NumericConfig& cfg) {
  cfg.validate();
  const double upper = d.support_upper();
  double lo = d.quantile(0.001, cfg);
  double hi = d.quantile(0.999, cfg);
  if (!(lo > 0.0)) {
    // Support starts at 0: nudge the first point strictly inside (0, H).
    lo = std::min(hi, d.mean(cfg)) * 1e-9 + 1e-300;
  }
  if (!(hi > lo)) hi = lo * (1.0 + 1e-9) + 1e-300;

  const std::size_t n = cfg.grid_points;
  std::vector<double> grid;
  grid.reserve(n);
  const bool log_spaced = !std::isfinite(upper);
  if (log_spaced) {
    const double llo = std::log(lo);
    const double lhi = std::log(hi);
    for (std::size_t i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) / static_cast<double>(n - 1);
      grid.push_back(std::exp(llo + t * (lhi - llo)));
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) / static_cast<double>(n - 1);
      grid.push_back(lo + t * (hi - lo));
    }
  }
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

ReliabilityCurves curves(const DemandDistribution& d,
                         const NumericConfig& cfg) {
  ReliabilityCurves out;
  out.grid = standard_grid(d, cfg);
  const std::size_t n = out.grid.size();
  out.m_values.assign(n, kNaN);
  out.l_values.assign(n, kNaN);
  out.h_values.assign(n, kNaN);
  out.g_values.assign(n, kNaN);
  out.eps_values.assign(n, kNaN);
  out.r_values.assign(n, kNaN);

  const bool density = d.has_density();
  const double upper = d.support_upper();
  const double lower = d.support_lower();

  for (std::size_t i = 0; i < n; ++i) {
    const double p = out.grid[i];
    try {
      const double tail = d.tail_integral(p, cfg);
      out.r_values[i] = p * tail;
      const double sbar = d.survival(p);
      if (sbar >= kSurvivalFloor && p < upper) {
        const double m = tail / sbar;
        out.m_values[i] = m;
        const double l = m / p;
        out.l_values[i] = l;
        out.eps_values[i] = 1.0 / l;
        if (density && p > lower) {
          const double h = d.density(p) / sbar;
          out.h_values[i] = h;
          out.g_values[i] = p * h;
        }
      }
    } catch (const Error&) {
      // Leave this grid point's entries as missing and keep going.
    }
  }
  return out;
}

std::string curves_csv(const ReliabilityCurves& c) {
  std::string out = "p,m,l,h,g,eps,R\n";
  const std::size_t n = c.grid.size();
  for (std::size_t i = 0; i < n; ++i) {
    append_cell(out, c.grid[i]);
    out += ',';
    append_cell(out, c.m_values[i]);
    out += ',';
    append_cell(out, c.l_values[i]);
    out += ',';
    append_cell(out, c.h_values[i]);
    out += ',';
    append_cell(out, c.g_values[i]);
    out += ',';
    append_cell(out, c.eps_values[i]);
    out += ',';
    append_cell(out, c.r_values[i]);
    out += '\n';
  }
  return out;
}

}  // namespace demand
