#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "demand/config.hpp"
#include "demand/distribution.hpp"

namespace demand {

// ---------------------------------------------------------------------------
// Monotonicity analysis of a sampled curve.
// ---------------------------------------------------------------------------

enum class Monotonicity {
  kNonincreasing,
  kNondecreasing,
  kConstant,
  kNonMonotone,
};

// A pair of grid points witnessing a rise or fall of the sampled values.
struct Witness {
  double p1 = 0.0;
  double p2 = 0.0;
  double value1 = 0.0;
  double value2 = 0.0;
};

struct MonotoneReport {
  Monotonicity verdict = Monotonicity::kConstant;
  // Largest adjacent increase/decrease exceeding the slack threshold.
  std::optional<Witness> largest_rise;
  std::optional<Witness> largest_fall;
  // True when some adjacent pair is equal within a slack proportional to the
  // local magnitude (used to separate strict from weak monotonicity).
  bool has_plateau = false;
};

// Classifies the direction of `values` sampled at `grid`. A rise or fall
// counts only when it exceeds slack * max|values|; NaN entries are skipped.
// Throws InvalidParameter when fewer than 16 usable points remain.
MonotoneReport classify_monotone(const std::vector<double>& grid,
                                 const std::vector<double>& values,
                                 double slack);

// ---------------------------------------------------------------------------
// Shape-class verdicts.
// ---------------------------------------------------------------------------

enum class Verdict { kHolds, kFailsWithWitness, kUnknown };

struct ClassVerdict {
  Verdict verdict = Verdict::kUnknown;
  std::optional<Witness> witness;  // set when verdict is kFailsWithWitness
  std::string note;
};

// ---------------------------------------------------------------------------
// Tail limits.
// ---------------------------------------------------------------------------

enum class LimitState { kConverged, kInfinite, kNotConverged };

struct TailLimit {
  LimitState state = LimitState::kNotConverged;
  double value = 0.0;  // meaningful only when state == kConverged
};

// Estimates lim_{p->inf} fn(p) by probing fn at quantile(0.9) * 2^j while
// survival stays >= 1e-12, up to cfg.tail_probe_max_doublings doublings.
// Declares convergence when the last four probes agree to cfg.tail_agree_tol
// relative; a consistently shrinking tail yields a converged limit of 0 and a
// consistently growing one yields kInfinite. Requires unbounded support.
TailLimit estimate_limit(const std::function<double(double)>& fn,
                         const DemandDistribution& d,
                         const NumericConfig& cfg = {});

// ---------------------------------------------------------------------------
// Moments.
// ---------------------------------------------------------------------------

enum class Finiteness { kFinite, kInfinite, kUnknown };

struct MomentResult {
  Finiteness finiteness = Finiteness::kUnknown;
  double value = 0.0;  // meaningful only when finite
  std::string note;
};

// E[X^order] for order > 0. Bounded support integrates directly. Unbounded
// support first tries the tail-limit criterion (finite iff order < 1 + 1/c
// when the scaled mean-residual-demand curve is nonincreasing with limit c;
// within 1e-2 of the boundary order 1 + 1/c the moment is infinite), and
// falls back to direct quadrature, mapping DivergentIntegral to "infinite"
// and an undecided quadrature to "unknown".
MomentResult moment(const DemandDistribution& d, double order,
                    const NumericConfig& cfg = {});

// ---------------------------------------------------------------------------
// Full classification.
// ---------------------------------------------------------------------------

struct ClassificationReport {
  ClassVerdict ifr;    // hazard rate nondecreasing
  ClassVerdict dmrd;   // mean residual demand nonincreasing
  ClassVerdict igfr;   // scaled hazard p*h(p) nondecreasing
  ClassVerdict dgmrd;  // scaled mean residual demand m(p)/p nonincreasing
  TailLimit gmrd_limit;  // c = lim m(p)/p
  TailLimit gfr_limit;   // kappa = lim p*h(p)
  Finiteness second_moment = Finiteness::kUnknown;
  double slack_used = 0.0;
};

// Evaluates all four shape classes on the standard grid (extended by tail
// probes for unbounded support), estimates both tail limits, derives second
// moment finiteness, and enforces the implication lattice
// IFR => IGFR, IFR => DMRD, IGFR => DGMRD, DMRD => DGMRD by downgrading the
// premise to unknown when grid noise produces a contradiction.
ClassificationReport classify(const DemandDistribution& d,
                              const NumericConfig& cfg = {});

// JSON rendering with fields ifr/dmrd/igfr/dgmrd (verdict + witness), c,
// kappa, second_moment_finite, tolerance. indent < 0 renders compactly.
std::string classification_json(const ClassificationReport& r, int indent = 2);

// ---------------------------------------------------------------------------
// Tail-limit consistency: c = 1/(kappa - 1) whenever kappa > 1 (with
// 1/(inf - 1) = 0).
// ---------------------------------------------------------------------------

struct LimitRelationCheck {
  bool applicable = false;
  bool pass = false;
  double residual = 0.0;
  std::string note;
};

LimitRelationCheck check_limit_relation(const ClassificationReport& r);

}  // namespace demand
