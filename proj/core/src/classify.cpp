#include "demand/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "demand/errors.hpp"
#include "demand/quadrature.hpp"
#include "demand/reliability.hpp"
#include "node.hpp"

namespace demand {

namespace {

constexpr double kSurvivalFloor = 1e-300;
constexpr double kTailProbeSurvival = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Geometric tail probes q(0.9) * 2^j while survival stays resolvable.
std::vector<double> tail_probes(const DemandDistribution& d,
                                const NumericConfig& cfg) {
  std::vector<double> probes;
  double p = d.quantile(0.9, cfg);
  if (!(p > 0.0)) p = std::max(d.mean(cfg), 1e-6);
  for (std::size_t j = 0; j <= cfg.tail_probe_max_doublings; ++j, p *= 2.0) {
    if (!(d.survival(p) >= kTailProbeSurvival)) break;
    probes.push_back(p);
  }
  return probes;
}

struct CurveSamples {
  std::vector<double> grid;
  std::vector<double> m, l, h, g;
};

CurveSamples sample_curves(const DemandDistribution& d,
                           const NumericConfig& cfg) {
  CurveSamples s;
  s.grid = standard_grid(d, cfg);
  if (!std::isfinite(d.support_upper())) {
    for (double p : tail_probes(d, cfg)) {
      if (p > s.grid.back()) s.grid.push_back(p);
    }
  }
  const std::size_t n = s.grid.size();
  s.m.assign(n, kNaN);
  s.l.assign(n, kNaN);
  s.h.assign(n, kNaN);
  s.g.assign(n, kNaN);
  const bool density = d.has_density();
  const double lower = d.support_lower();
  const double upper = d.support_upper();
  for (std::size_t i = 0; i < n; ++i) {
    const double p = s.grid[i];
    if (!(p < upper)) continue;
    try {
      const double sbar = d.survival(p);
      if (sbar < kSurvivalFloor) continue;
      const double m = d.tail_integral(p, cfg) / sbar;
      s.m[i] = m;
      s.l[i] = m / p;
      if (density && p > lower) {
        const double h = d.density(p) / sbar;
        s.h[i] = h;
        s.g[i] = p * h;
      }
    } catch (const Error&) {
      // Leave the point missing.
    }
  }
  return s;
}

ClassVerdict verdict_from_monotone(const std::vector<double>& grid,
                                   const std::vector<double>& values,
                                   double slack, bool expect_nonincreasing) {
  ClassVerdict out;
  MonotoneReport rep;
  try {
    rep = classify_monotone(grid, values, slack);
  } catch (const Error& e) {
    out.verdict = Verdict::kUnknown;
    out.note = e.what();
    return out;
  }
  const auto& violation =
      expect_nonincreasing ? rep.largest_rise : rep.largest_fall;
  if (violation) {
    out.verdict = Verdict::kFailsWithWitness;
    out.witness = *violation;
  } else {
    out.verdict = Verdict::kHolds;
  }
  return out;
}

void downgrade(ClassVerdict& premise, const char* conflict) {
  if (premise.verdict == Verdict::kHolds) {
    premise.verdict = Verdict::kUnknown;
    premise.witness.reset();
    premise.note = std::string("downgraded: grid verdict conflicts with ") +
                   conflict + " under the implication lattice";
  }
}

nlohmann::ordered_json verdict_json(const ClassVerdict& v) {
  nlohmann::ordered_json j;
  switch (v.verdict) {
    case Verdict::kHolds:
      j["verdict"] = "holds";
      break;
    case Verdict::kFailsWithWitness:
      j["verdict"] = "fails-with-witness";
      break;
    case Verdict::kUnknown:
      j["verdict"] = "unknown";
      break;
  }
  if (v.witness) {
    j["witness"] = nlohmann::ordered_json::array(
        {v.witness->p1, v.witness->p2});
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

}  // namespace

MonotoneReport classify_monotone(const std::vector<double>& grid,
                                 const std::vector<double>& values,
                                 double slack) {
  if (grid.size() != values.size()) {
    throw InvalidParameter("grid and values must have equal length");
  }
  if (!(slack >= 0.0) || !std::isfinite(slack)) {
    throw InvalidParameter("slack must be finite and nonnegative");
  }
  std::vector<double> xs, vs;
  xs.reserve(grid.size());
  vs.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isnan(values[i]) && std::isfinite(grid[i])) {
      xs.push_back(grid[i]);
      vs.push_back(values[i]);
    }
  }
  if (xs.size() < 16) {
    throw InvalidParameter(
        "monotonicity classification needs at least 16 usable points");
  }

  double scale = 0.0;
  for (double v : vs) scale = std::max(scale, std::abs(v));
  const double threshold = slack * std::max(scale, 1e-300);

  MonotoneReport rep;
  // Compare each value against the running extremum so cumulative drifts
  // made of many sub-threshold steps are still caught.
  double best_rise = threshold;
  double best_fall = threshold;
  std::size_t i_min = 0, i_max = 0;
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const double rise = vs[i] - vs[i_min];
    if (rise > best_rise) {
      best_rise = rise;
      rep.largest_rise = Witness{xs[i_min], xs[i], vs[i_min], vs[i]};
    }
    const double fall = vs[i_max] - vs[i];
    if (fall > best_fall) {
      best_fall = fall;
      rep.largest_fall = Witness{xs[i_max], xs[i], vs[i_max], vs[i]};
    }
    if (vs[i] < vs[i_min]) i_min = i;
    if (vs[i] > vs[i_max]) i_max = i;
    const double local =
        slack * std::max({std::abs(vs[i - 1]), std::abs(vs[i]), 1e-300});
    if (std::abs(vs[i] - vs[i - 1]) <= local) rep.has_plateau = true;
  }

  if (rep.largest_rise && rep.largest_fall) {
    rep.verdict = Monotonicity::kNonMonotone;
  } else if (rep.largest_rise) {
    rep.verdict = Monotonicity::kNondecreasing;
  } else if (rep.largest_fall) {
    rep.verdict = Monotonicity::kNonincreasing;
  } else {
    rep.verdict = Monotonicity::kConstant;
  }
  return rep;
}

TailLimit estimate_limit(const std::function<double(double)>& fn,
                         const DemandDistribution& d,
                         const NumericConfig& cfg) {
  cfg.validate();
  if (std::isfinite(d.support_upper())) {
    throw DomainError("tail-limit estimation requires unbounded support");
  }
  std::vector<double> vals;
  double p = d.quantile(0.9, cfg);
  if (!(p > 0.0)) p = std::max(d.mean(cfg), 1e-6);
  for (std::size_t j = 0; j <= cfg.tail_probe_max_doublings; ++j, p *= 2.0) {
    if (!(d.survival(p) >= kTailProbeSurvival)) break;
    const double v = fn(p);
    if (!std::isfinite(v)) break;
    vals.push_back(v);
  }

  const double tol = cfg.tail_agree_tol;
  const std::size_t n = vals.size();

  if (n >= 4) {
    // Plain agreement over the last four probes.
    double mx = -kInf, mn = kInf, scale = 0.0;
    for (std::size_t i = n - 4; i < n; ++i) {
      mx = std::max(mx, vals[i]);
      mn = std::min(mn, vals[i]);
      scale = std::max(scale, std::abs(vals[i]));
    }
    if (mx - mn <= tol * std::max(scale, 1e-300)) {
      return {LimitState::kConverged, vals.back()};
    }
    // Richardson extrapolation assuming a 1/p correction term: for values at
    // doubling abscissae, 2*v[i+1] - v[i] cancels it exactly. Three agreeing
    // extrapolants from the last four probes pin the limit.
    double e[3];
    for (int k = 0; k < 3; ++k) {
      e[k] = 2.0 * vals[n - 3 + k] - vals[n - 4 + k];
    }
    const double emx = std::max({e[0], e[1], e[2]});
    const double emn = std::min({e[0], e[1], e[2]});
    const double vscale = std::max(std::abs(vals.back()), 1e-300);
    if (emx - emn <= tol * vscale) {
      double limit = e[2];
      if (limit < 0.0) {
        if (-limit <= tol * std::max(vscale, 1.0)) {
          limit = 0.0;
        } else {
          limit = kNaN;  // extrapolated past zero: fall through to trends
        }
      }
      if (!std::isnan(limit)) return {LimitState::kConverged, limit};
    }
  }

  if (n >= 3) {
    const std::size_t w = std::min<std::size_t>(4, n);
    bool all_pos = true;
    for (std::size_t i = n - w; i < n; ++i) all_pos = all_pos && vals[i] > 0.0;
    if (all_pos) {
      bool decaying = true, growing = true;
      for (std::size_t i = n - w; i + 1 < n; ++i) {
        const double r = vals[i + 1] / vals[i];
        decaying = decaying && r <= 0.9;
        growing = growing && r >= 1.1;
      }
      if (decaying) return {LimitState::kConverged, 0.0};
      if (growing) return {LimitState::kInfinite, kInf};
    }
  } else if (n == 2 && vals[0] > 0.0 && vals[1] > 0.0) {
    const double r = vals[1] / vals[0];
    if (r <= 0.6) return {LimitState::kConverged, 0.0};
    if (r >= 1.67) return {LimitState::kInfinite, kInf};
  }

  return {LimitState::kNotConverged, 0.0};
}

MomentResult moment(const DemandDistribution& d, double order,
                    const NumericConfig& cfg) {
  cfg.validate();
  if (!(order > 0.0) || !std::isfinite(order)) {
    throw InvalidParameter("moment order must be finite and positive");
  }
  const double lower = d.support_lower();
  const double upper = d.support_upper();
  const auto& node = d.node();
  const auto opts = detail::quad_options(cfg);

  // E[X^r] = L^r + integral over (L, H) of r u^(r-1) survival(u) du,
  // valid because the support starts at L >= 0.
  const auto integrand = [&](double u) {
    return order * std::pow(u, order - 1.0) * d.survival(u);
  };
  std::vector<double> raw_breaks;
  node.collect_breakpoints(raw_breaks);
  std::vector<double> breaks;
  for (double b : raw_breaks) {
    if (b > lower && (!std::isfinite(upper) || b < upper)) breaks.push_back(b);
  }
  const double head = std::pow(lower, order);

  if (std::isfinite(upper)) {
    MomentResult out;
    out.finiteness = Finiteness::kFinite;
    out.value = head + quad::integrate(integrand, lower, upper, opts, breaks);
    return out;
  }

  // Unbounded support: try the tail-limit criterion first. It applies when
  // the scaled mean-residual-demand curve is nonincreasing on the grid and
  // its tail limit c converges; then E[X^r] is finite iff r < 1 + 1/c, with
  // the boundary itself infinite.
  bool scaled_mrd_nonincreasing = false;
  TailLimit c{LimitState::kNotConverged, 0.0};
  try {
    CurveSamples s = sample_curves(d, cfg);
    MonotoneReport rep = classify_monotone(s.grid, s.l, cfg.mono_slack);
    scaled_mrd_nonincreasing = !rep.largest_rise.has_value();
    c = estimate_limit(
        [&](double p) {
          return d.tail_integral(p, cfg) / d.survival(p) / p;
        },
        d, cfg);
  } catch (const Error&) {
    scaled_mrd_nonincreasing = false;
  }

  if (scaled_mrd_nonincreasing && c.state != LimitState::kNotConverged) {
    const double cutoff =
        (c.state == LimitState::kInfinite)
            ? 1.0
            : (c.value <= 0.0 ? kInf : 1.0 + 1.0 / c.value);
    if (std::isfinite(cutoff) && std::abs(order - cutoff) <= 1e-2) {
      MomentResult out;
      out.finiteness = Finiteness::kInfinite;
      out.note = "order sits at the tail-limit finiteness boundary";
      return out;
    }
    if (order > cutoff) {
      MomentResult out;
      out.finiteness = Finiteness::kInfinite;
      out.note = "tail-limit criterion: order exceeds 1 + 1/c";
      return out;
    }
    // order < cutoff: finite; fall through to compute the value.
    try {
      MomentResult out;
      out.finiteness = Finiteness::kFinite;
      out.value = head + quad::integrate_upper(integrand, lower, opts, breaks,
                                               std::max(1.0, d.mean(cfg)));
      return out;
    } catch (const QuadratureError&) {
      MomentResult out;
      out.finiteness = Finiteness::kFinite;
      out.value = kNaN;
      out.note = "finite by the tail-limit criterion, but quadrature did not "
                 "settle on a value";
      return out;
    }
  }

  // No usable tail limit: integrate directly and map the failure modes.
  try {
    MomentResult out;
    out.finiteness = Finiteness::kFinite;
    out.value = head + quad::integrate_upper(integrand, lower, opts, breaks,
                                             std::max(1.0, d.mean(cfg)));
    return out;
  } catch (const DivergentIntegral&) {
    MomentResult out;
    out.finiteness = Finiteness::kInfinite;
    out.note = "numerically divergent tail integral";
    return out;
  } catch (const QuadratureError&) {
    MomentResult out;
    out.finiteness = Finiteness::kUnknown;
    out.note = "quadrature did not settle and no tail limit is available";
    return out;
  }
}

ClassificationReport classify(const DemandDistribution& d,
                              const NumericConfig& cfg) {
  cfg.validate();
  ClassificationReport rep;
  rep.slack_used = cfg.mono_slack;

  const CurveSamples s = sample_curves(d, cfg);
  rep.dmrd = verdict_from_monotone(s.grid, s.m, cfg.mono_slack, true);
  rep.dgmrd = verdict_from_monotone(s.grid, s.l, cfg.mono_slack, true);
  if (d.has_density()) {
    rep.ifr = verdict_from_monotone(s.grid, s.h, cfg.mono_slack, false);
    rep.igfr = verdict_from_monotone(s.grid, s.g, cfg.mono_slack, false);
  } else {
    rep.ifr.verdict = Verdict::kUnknown;
    rep.ifr.note = "no density available";
    rep.igfr.verdict = Verdict::kUnknown;
    rep.igfr.note = "no density available";
  }

  // Implication lattice: a premise that "holds" while one of its conclusions
  // fails is grid noise; downgrade the premise.
  if (rep.dgmrd.verdict == Verdict::kFailsWithWitness) {
    downgrade(rep.dmrd, "the scaled mean-residual-demand failure");
    downgrade(rep.igfr, "the scaled mean-residual-demand failure");
    downgrade(rep.ifr, "the scaled mean-residual-demand failure");
  }
  if (rep.dmrd.verdict == Verdict::kFailsWithWitness ||
      rep.igfr.verdict == Verdict::kFailsWithWitness) {
    downgrade(rep.ifr, "a mid-lattice failure");
  }

  // Tail limits.
  const bool unbounded = !std::isfinite(d.support_upper());
  if (!unbounded) {
    rep.gmrd_limit = {LimitState::kConverged, 0.0};
    // p*h(p) diverges toward a finite support end; detect the blow-up on the
    // sampled grid rather than probing past it.
    rep.gfr_limit = {LimitState::kNotConverged, 0.0};
    std::vector<double> g_ok;
    for (double v : s.g) {
      if (!std::isnan(v)) g_ok.push_back(v);
    }
    if (g_ok.size() >= 6) {
      bool increasing = true;
      for (std::size_t i = g_ok.size() - 6; i + 1 < g_ok.size(); ++i) {
        increasing = increasing && g_ok[i + 1] > g_ok[i];
      }
      if (increasing && g_ok.back() > 100.0) {
        rep.gfr_limit = {LimitState::kInfinite, kInf};
      }
    }
  } else {
    rep.gmrd_limit = estimate_limit(
        [&](double p) { return d.tail_integral(p, cfg) / d.survival(p) / p; },
        d, cfg);
    if (d.has_density()) {
      rep.gfr_limit = estimate_limit(
          [&](double p) { return p * d.density(p) / d.survival(p); }, d, cfg);
    } else {
      rep.gfr_limit = {LimitState::kNotConverged, 0.0};
    }
  }

  // Second moment finiteness.
  if (!unbounded) {
    rep.second_moment = Finiteness::kFinite;
  } else if (rep.dgmrd.verdict == Verdict::kHolds) {
    switch (rep.gmrd_limit.state) {
      case LimitState::kConverged: {
        const double c = rep.gmrd_limit.value;
        if (std::abs(c - 1.0) <= 5e-3) {
          rep.second_moment = Finiteness::kInfinite;  // boundary c = 1
        } else if (c < 1.0) {
          rep.second_moment = Finiteness::kFinite;
        } else {
          rep.second_moment = Finiteness::kInfinite;
        }
        break;
      }
      case LimitState::kInfinite:
        rep.second_moment = Finiteness::kInfinite;
        break;
      case LimitState::kNotConverged:
        rep.second_moment = Finiteness::kUnknown;
        break;
    }
  } else {
    rep.second_moment = Finiteness::kUnknown;
  }

  return rep;
}

std::string classification_json(const ClassificationReport& r, int indent) {
  nlohmann::ordered_json j;
  j["ifr"] = verdict_json(r.ifr);
  j["dmrd"] = verdict_json(r.dmrd);
  j["igfr"] = verdict_json(r.igfr);
  j["dgmrd"] = verdict_json(r.dgmrd);
  switch (r.gmrd_limit.state) {
    case LimitState::kConverged:
      j["c"] = r.gmrd_limit.value;
      break;
    case LimitState::kInfinite:
      j["c"] = "inf";
      break;
    case LimitState::kNotConverged:
      j["c"] = "not-converged";
      break;
  }
  switch (r.gfr_limit.state) {
    case LimitState::kConverged:
      j["kappa"] = r.gfr_limit.value;
      break;
    case LimitState::kInfinite:
      j["kappa"] = "inf";
      break;
    case LimitState::kNotConverged:
      j["kappa"] = "not-converged";
      break;
  }
  switch (r.second_moment) {
    case Finiteness::kFinite:
      j["second_moment_finite"] = "finite";
      break;
    case Finiteness::kInfinite:
      j["second_moment_finite"] = "infinite";
      break;
    case Finiteness::kUnknown:
      j["second_moment_finite"] = "unknown";
      break;
  }
  j["tolerance"] = r.slack_used;
  return indent < 0 ? j.dump() : j.dump(indent);
}

LimitRelationCheck check_limit_relation(const ClassificationReport& r) {
  LimitRelationCheck out;
  if (r.gmrd_limit.state != LimitState::kConverged) {
    out.note = "c did not converge";
    return out;
  }
  double target = 0.0;
  if (r.gfr_limit.state == LimitState::kInfinite) {
    target = 0.0;  // 1/(inf - 1)
  } else if (r.gfr_limit.state == LimitState::kConverged) {
    if (!(r.gfr_limit.value > 1.0)) {
      out.note = "kappa <= 1: the reciprocal relation does not apply";
      return out;
    }
    target = 1.0 / (r.gfr_limit.value - 1.0);
  } else {
    out.note = "kappa did not converge";
    return out;
  }
  out.applicable = true;
  out.residual = std::abs(r.gmrd_limit.value - target);
  out.pass = out.residual <= 1e-3;
  if (!out.pass) out.note = "tail limits disagree beyond 1e-3";
  return out;
}

}  // namespace demand
