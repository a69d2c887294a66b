#include "demand/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <json.hpp>

#include "demand/classify.hpp"
#include "demand/errors.hpp"
#include "demand/reliability.hpp"
#include "demand/roots.hpp"

namespace demand {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kSurvivalFloor = 1e-300;
constexpr double kHorizonSurvival = 1e-12;
constexpr double kRayPhiTol = 1e-8;       // |m(p)-p| <= this*max(1,p) on a ray
constexpr double kRayConstTol = 1e-6;     // survival*p^2 constancy on a ray
constexpr double kFixedPointTol = 1e-10;  // refinement target for |m(p)-p|
constexpr double kUnitSlack = 1e-9;       // l >= 1 - this keeps extending

NumericConfig refine_config(NumericConfig cfg) {
  cfg.quad_abs_tol = std::min(cfg.quad_abs_tol, 1e-14);
  cfg.quad_rel_tol = std::min(cfg.quad_rel_tol, 1e-12);
  return cfg;
}

struct GridEval {
  std::vector<double> p, sbar, tail, m, l, phi, r;
  bool reached_horizon = false;  // extension stopped by underflow or the cap
  double cert_lo = 0.0;          // certificate checks start here (q(0.001))
  double upper = kInf;           // support upper end
};

bool eval_point(const DemandDistribution& d, const NumericConfig& cfg,
                double price, GridEval& g) {
  try {
    const double sbar = d.survival(price);
    if (!(sbar >= kSurvivalFloor)) return false;
    const double tail = d.tail_integral(price, cfg);
    const double m = tail / sbar;
    g.p.push_back(price);
    g.sbar.push_back(sbar);
    g.tail.push_back(tail);
    g.m.push_back(m);
    g.l.push_back(m / price);
    g.phi.push_back(m - price);
    g.r.push_back(price * tail);
    return true;
  } catch (const Error&) {
    return false;
  }
}

GridEval evaluate_grid(const DemandDistribution& d, const NumericConfig& cfg) {
  GridEval g;
  g.upper = d.support_upper();
  const double mean = d.mean(cfg);
  g.cert_lo = d.quantile(0.001, cfg);

  std::vector<double> pts = standard_grid(d, cfg);
  const double lo = std::max(mean * 1e-6, 1e-300);
  const double hi = pts.back();
  if (hi > lo) {
    const std::size_t n = std::max<std::size_t>(cfg.grid_points, 256);
    const double llo = std::log(lo);
    const double lhi = std::log(hi);
    for (std::size_t i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) / static_cast<double>(n - 1);
      pts.push_back(std::exp(llo + t * (lhi - llo)));
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](double a, double b) {
                          return std::abs(a - b) <=
                                 1e-13 * std::max(std::abs(a), std::abs(b));
                        }),
            pts.end());

  for (double price : pts) {
    if (!(price > 0.0)) continue;
    if (price >= g.upper) break;
    if (!eval_point(d, cfg, price, g)) break;
  }

  // Grow the upper end by doubling while expected demand stays elastic-
  // boundary or better (l >= 1), so divergent-revenue tails are visible.
  if (!std::isfinite(g.upper) && !g.p.empty()) {
    std::size_t doublings = 0;
    while (g.l.back() >= 1.0 - kUnitSlack) {
      if (doublings++ >= cfg.tail_probe_max_doublings) {
        g.reached_horizon = true;
        break;
      }
      const double next = g.p.back() * 2.0;
      if (!(d.survival(next) >= kHorizonSurvival) ||
          !eval_point(d, cfg, next, g)) {
        g.reached_horizon = true;
        break;
      }
    }
  }
  return g;
}

// Bisects |phi(x)| - kRayPhiTol*max(1,x) between a point outside a ray and a
// point inside it to locate the ray's edge.
double refine_ray_edge(const DemandDistribution& d, const NumericConfig& cfg,
                       double outside, double inside) {
  const NumericConfig rcfg = refine_config(cfg);
  auto gap = [&](double x) {
    const double sbar = d.survival(x);
    if (!(sbar >= kSurvivalFloor)) return -1.0;
    const double phi = d.tail_integral(x, rcfg) / sbar - x;
    return std::abs(phi) - kRayPhiTol * std::max(1.0, x);
  };
  double a = outside, b = inside;
  if (!(gap(a) > 0.0)) return inside;  // already inside: no edge to find
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (a + b);
    if (mid == a || mid == b) break;
    if (gap(mid) > 0.0) {
      a = mid;
    } else {
      b = mid;
    }
  }
  return b;
}

double refine_fixed_point(const DemandDistribution& d,
                          const NumericConfig& cfg, double lo, double hi,
                          double phi_lo) {
  const NumericConfig rcfg = refine_config(cfg);
  auto phi = [&](double x) {
    return d.tail_integral(x, rcfg) / d.survival(x) - x;
  };
  double a = lo, b = hi;
  double fa = phi_lo;
  double best = 0.5 * (a + b);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (a + b);
    if (mid == a || mid == b) break;
    const double fm = phi(mid);
    best = mid;
    if (std::abs(fm) <= kFixedPointTol * std::max(1.0, mid)) return mid;
    if ((fa > 0.0) == (fm > 0.0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  return best;
}

FixedPointScan scan_grid(const DemandDistribution& d, const NumericConfig& cfg,
                         const GridEval& g) {
  FixedPointScan out;
  const std::size_t n = g.p.size();
  std::vector<char> in_ray(n, 0);

  // Ray detection: maximal stretches with phi ~ 0 whose survival * p^2 stays
  // constant.
  std::size_t i = 0;
  while (i < n) {
    if (std::abs(g.phi[i]) > kRayPhiTol * std::max(1.0, g.p[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < n &&
           std::abs(g.phi[j + 1]) <= kRayPhiTol * std::max(1.0, g.p[j + 1])) {
      ++j;
    }
    if (j - i + 1 >= 3) {
      double mx = 0.0, mn = kInf;
      for (std::size_t k = i; k <= j; ++k) {
        const double c = g.sbar[k] * g.p[k] * g.p[k];
        mx = std::max(mx, c);
        mn = std::min(mn, c);
      }
      if (mx <= mn * (1.0 + kRayConstTol)) {
        Ray ray;
        ray.lower = (i == 0) ? g.p[0]
                             : refine_ray_edge(d, cfg, g.p[i - 1], g.p[i]);
        if (j + 1 < n) {
          ray.upper = refine_ray_edge(d, cfg, g.p[j + 1], g.p[j]);
        } else {
          ray.upper = g.reached_horizon ? kInf : g.p[n - 1];
        }
        out.rays.push_back(ray);
        for (std::size_t k = i; k <= j; ++k) in_ray[k] = 1;
      }
    }
    i = j + 1;
  }

  // Isolated fixed points: sign changes between consecutive non-ray points.
  std::size_t prev = n;  // npos
  for (std::size_t k = 0; k < n; ++k) {
    if (in_ray[k]) continue;
    if (g.phi[k] == 0.0) {
      out.points.push_back(g.p[k]);
      prev = n;
      continue;
    }
    if (prev < n && g.phi[prev] * g.phi[k] < 0.0) {
      out.points.push_back(
          refine_fixed_point(d, cfg, g.p[prev], g.p[k], g.phi[prev]));
    }
    prev = k;
  }
  std::sort(out.points.begin(), out.points.end());
  out.points.erase(
      std::unique(out.points.begin(), out.points.end(),
                  [](double a, double b) {
                    return std::abs(a - b) <= 1e-9 * std::max(1.0, b);
                  }),
      out.points.end());
  return out;
}

double p1_from_grid(const DemandDistribution& d, const NumericConfig& cfg,
                    const GridEval& g) {
  const std::size_t n = g.p.size();
  std::size_t idx = n;
  for (std::size_t k = 0; k < n; ++k) {
    if (g.l[k] >= 1.0 - kUnitSlack) idx = k;
  }
  if (idx == n) return 0.0;  // l never reaches 1 on the grid

  auto excess = [&](double x) {
    try {
      const double sbar = d.survival(x);
      if (!(sbar >= kSurvivalFloor)) return -1.0;
      return d.tail_integral(x, cfg) / sbar / x - 1.0;
    } catch (const Error&) {
      return -1.0;
    }
  };

  if (idx + 1 == n) {
    if (!std::isfinite(g.upper)) return kInf;
    // l >= 1 persisted to the grid's end under a finite support: the
    // crossing sits between the last grid point and the support's end.
    return roots::bisect(excess, g.p[idx], g.upper * (1.0 - 1e-12),
                  g.l[idx] - 1.0, -1.0, cfg.root_tol);
  }
  if (g.l[idx] > 1.0 + 1e-12 && g.l[idx + 1] < 1.0 - 1e-12) {
    return roots::bisect(excess, g.p[idx], g.p[idx + 1], g.l[idx] - 1.0,
                  g.l[idx + 1] - 1.0, cfg.root_tol);
  }
  return g.p[idx];
}

double golden_max(const std::function<double(double)>& fn, double a,
                  double b) {
  const double gr = 0.6180339887498949;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = fn(c), fd = fn(d);
  for (int it = 0; it < 200; ++it) {
    if (b - a <= 4e-16 * std::max(1.0, std::abs(b))) break;
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = fn(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = fn(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

FixedPointScan find_fixed_points(const DemandDistribution& d,
                                 const NumericConfig& cfg) {
  cfg.validate();
  const GridEval g = evaluate_grid(d, cfg);
  if (g.p.empty()) {
    throw QuadratureError("could not evaluate m(p) - p on the pricing grid");
  }
  return scan_grid(d, cfg, g);
}

double compute_p1(const DemandDistribution& d, const NumericConfig& cfg) {
  cfg.validate();
  const GridEval g = evaluate_grid(d, cfg);
  if (g.p.empty()) {
    throw QuadratureError("could not evaluate l(p) on the pricing grid");
  }
  return p1_from_grid(d, cfg, g);
}

PricingSolution solve(const DemandDistribution& d, const NumericConfig& cfg) {
  cfg.validate();
  const GridEval g = evaluate_grid(d, cfg);
  if (g.p.empty()) {
    throw QuadratureError("could not evaluate the pricing grid");
  }
  const FixedPointScan scan = scan_grid(d, cfg, g);

  PricingSolution out;
  out.fixed_points = scan.points;
  out.rays = scan.rays;
  out.p1 = p1_from_grid(d, cfg, g);

  // Certificate: monotonicity of l from the 0.1% quantile up (below it the
  // curve is mean/p - 1, strictly decreasing by construction).
  {
    std::vector<double> xs, ls;
    for (std::size_t k = 0; k < g.p.size(); ++k) {
      if (g.p[k] >= g.cert_lo * (1.0 - 1e-12)) {
        xs.push_back(g.p[k]);
        ls.push_back(g.l[k]);
      }
    }
    MonotoneReport rep;
    bool have_rep = true;
    try {
      rep = classify_monotone(xs, ls, cfg.mono_slack);
    } catch (const Error&) {
      have_rep = false;
    }
    if (!have_rep) {
      out.certificate = Certificate::kNotCertified;
      out.certificate_reason = "too few usable grid points";
    } else if (rep.largest_rise) {
      out.certificate = Certificate::kNotCertified;
      out.certificate_reason =
          "scaled mean residual demand rises on the grid";
    } else if (!(out.p1 < kInf)) {
      out.certificate = Certificate::kNotCertified;
      out.certificate_reason = "p1 is not finite";
    } else if (!scan.rays.empty()) {
      out.certificate = Certificate::kNotCertified;
      out.certificate_reason = "a fixed-point ray excludes uniqueness";
    } else if (!rep.has_plateau) {
      out.certificate = Certificate::kDgmrdStrict;
      out.certificate_reason =
          "scaled mean residual demand strictly decreasing with finite p1";
    } else {
      out.certificate = Certificate::kDgmrdWeakSafe;
      out.certificate_reason =
          "scaled mean residual demand weakly decreasing with finite p1 and "
          "no ray";
    }
    if (d.survival(0.0) < 1.0 - 1e-12) {
      out.certificate_reason +=
          "; note: positive mass at or below zero could not be ruled out";
    }
  }

  // Revenue still rising where survival underflows: no finite maximizer.
  if (!std::isfinite(g.upper) && g.reached_horizon &&
      g.l.back() > 1.0 + kUnitSlack) {
    out.finite_maximizer = false;
    out.optimal_price = kNaN;
    out.optimal_revenue = kNaN;
    out.elasticity_at_optimum = kNaN;
    out.certificate = Certificate::kNotCertified;
    out.certificate_reason =
        "expected revenue is still rising at the numerical horizon";
    return out;
  }

  const NumericConfig rcfg = refine_config(cfg);
  auto revenue = [&](double price) {
    try {
      if (!(price > 0.0) || price >= g.upper) return -kInf;
      return price * d.tail_integral(price, rcfg);
    } catch (const Error&) {
      return -kInf;
    }
  };
  auto scaled_mrd = [&](double price) {
    try {
      const double sbar = d.survival(price);
      if (!(sbar >= kSurvivalFloor)) return kNaN;
      return d.tail_integral(price, rcfg) / sbar / price;
    } catch (const Error&) {
      return kNaN;
    }
  };

  if (out.certificate != Certificate::kNotCertified &&
      scan.points.size() == 1) {
    const double star = scan.points.front();
    out.optimal_price = star;
    out.optimal_revenue = revenue(star);
    out.elasticity_at_optimum = 1.0 / scaled_mrd(star);
    return out;
  }
  if (out.certificate != Certificate::kNotCertified) {
    out.certificate = Certificate::kNotCertified;
    out.certificate_reason +=
        "; withdrawn: the fixed-point count is not one";
  }

  // Direct evaluation: best revenue among fixed points, ray endpoints, and
  // the refined grid argmax.
  struct Candidate {
    double price;
    double rev;
    int kind;  // 0 = ray lower, 1 = fixed point, 2 = grid/refined
  };
  std::vector<Candidate> cands;
  for (const Ray& ray : scan.rays) {
    cands.push_back({ray.lower, revenue(ray.lower), 0});
    if (std::isfinite(ray.upper)) {
      cands.push_back({ray.upper, revenue(ray.upper), 2});
    }
  }
  for (double fp : scan.points) cands.push_back({fp, revenue(fp), 1});

  std::size_t arg = 0;
  for (std::size_t k = 1; k < g.p.size(); ++k) {
    if (g.r[k] > g.r[arg]) arg = k;
  }
  cands.push_back({g.p[arg], g.r[arg], 2});
  const double lo = arg > 0 ? g.p[arg - 1] : g.p[arg];
  const double hi = arg + 1 < g.p.size() ? g.p[arg + 1] : g.p[arg];
  if (hi > lo) {
    const double refined = golden_max(revenue, lo, hi);
    cands.push_back({refined, revenue(refined), 2});
  }

  double best = -kInf;
  for (const Candidate& c : cands) best = std::max(best, c.rev);
  if (!(best > -kInf)) {
    throw QuadratureError("could not evaluate revenue at any candidate");
  }
  const Candidate* chosen = nullptr;
  for (int kind = 0; kind <= 2 && !chosen; ++kind) {
    for (const Candidate& c : cands) {
      if (c.kind == kind && c.rev >= best * (1.0 - 1e-9)) {
        chosen = &c;
        break;
      }
    }
  }
  out.optimal_price = chosen->price;
  out.optimal_revenue = chosen->rev;
  out.elasticity_at_optimum = 1.0 / scaled_mrd(chosen->price);
  return out;
}

std::string pricing_json(const PricingSolution& s, int indent) {
  nlohmann::ordered_json j;
  j["fixed_points"] = s.fixed_points;
  auto rays = nlohmann::ordered_json::array();
  for (const Ray& ray : s.rays) {
    auto r = nlohmann::ordered_json::array();
    r.push_back(ray.lower);
    if (std::isfinite(ray.upper)) {
      r.push_back(ray.upper);
    } else {
      r.push_back("inf");
    }
    rays.push_back(r);
  }
  j["rays"] = rays;
  if (std::isfinite(s.p1)) {
    j["p1"] = s.p1;
  } else {
    j["p1"] = "inf";
  }
  switch (s.certificate) {
    case Certificate::kDgmrdStrict:
      j["certificate"] = "dgmrd-strict";
      break;
    case Certificate::kDgmrdWeakSafe:
      j["certificate"] = "dgmrd-weak-safe";
      break;
    case Certificate::kNotCertified:
      j["certificate"] = "not-certified";
      break;
  }
  if (s.finite_maximizer) {
    j["optimal_price"] = s.optimal_price;
    j["optimal_revenue"] = s.optimal_revenue;
    if (std::isfinite(s.elasticity_at_optimum)) {
      j["elasticity_at_optimum"] = s.elasticity_at_optimum;
    } else {
      j["elasticity_at_optimum"] = nullptr;
    }
  } else {
    j["optimal_price"] = "none";
    j["optimal_revenue"] = nullptr;
    j["elasticity_at_optimum"] = nullptr;
  }
  return indent < 0 ? j.dump() : j.dump(indent);
}

}  // namespace demand
