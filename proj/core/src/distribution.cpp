#include "demand/distribution.hpp"

#include <cmath>
#include <limits>

#include "demand/errors.hpp"
#include "demand/roots.hpp"
#include "node.hpp"

namespace demand {
namespace detail {

quad::Options quad_options(const NumericConfig& cfg) {
  quad::Options opts;
  opts.abs_tol = cfg.quad_abs_tol;
  opts.rel_tol = cfg.quad_rel_tol;
  return opts;
}

double DistNode::density(double) const {
  throw MissingDensity("density unavailable for " + describe());
}

double DistNode::tail(double x, const NumericConfig& cfg) const {
  const double lo = lower();
  if (x < lo) {
    // Survival is identically 1 below the support.
    return (lo - x) + tail(lo, cfg);
  }
  const double hi = upper();
  if (std::isfinite(hi) && x >= hi) {
    return 0.0;
  }

  quad::Options opts = quad_options(cfg);
  // Deep in a tail the integral is of order survival(x) * (local scale);
  // scale the absolute floor accordingly or it swamps the value.
  const double sx = survival(x);
  opts.abs_tol = std::max(cfg.quad_abs_tol * std::max(sx, 1e-300),
                          std::numeric_limits<double>::min());

  std::vector<double> bp;
  collect_breakpoints(bp);
  const auto f = [this](double u) { return survival(u); };
  if (std::isfinite(hi)) {
    return quad::integrate(f, x, hi, opts, bp);
  }
  return quad::integrate_upper(f, x, opts, bp);
}

double DistNode::quantile(double q, const NumericConfig& cfg) const {
  if (!(q >= 0.0 && q < 1.0)) {
    throw InvalidParameter("quantile: q must lie in [0, 1)");
  }
  const double lo = lower();
  if (q == 0.0) {
    return lo;
  }
  const double target = 1.0 - q;  // want smallest x with survival(x) <= target

  double hi = upper();
  if (!std::isfinite(hi)) {
    double step = std::max(1.0, std::fabs(lo));
    hi = lo + step;
    while (survival(hi) > target) {
      step *= 2.0;
      hi = lo + step;
      if (hi > 1e300) {
        throw BeyondNumericalSupport(
            "quantile: bracket expansion exceeded the numeric range for " +
            describe());
      }
    }
  }

  // survival(x) - target is nonincreasing: positive at lo (survival(lo) = 1
  // > target), nonpositive at hi.
  const auto g = [&](double x) { return survival(x) - target; };
  return roots::bisect(g, lo, hi, q, g(hi), cfg.root_tol);
}

double DistNode::draw(Rng& rng, const NumericConfig& cfg) const {
  return quantile(rng.uniform01(), cfg);
}

void DistNode::collect_breakpoints(std::vector<double>& out) const {
  out.push_back(lower());
  if (std::isfinite(upper())) {
    out.push_back(upper());
  }
}

double DistNode::mean(const NumericConfig& cfg) const {
  std::call_once(mean_once_,
                 [&] { mean_value_ = lower() + tail(lower(), cfg); });
  return mean_value_;
}

}  // namespace detail

DemandDistribution::DemandDistribution(
    std::shared_ptr<const detail::DistNode> node)
    : node_(std::move(node)) {
  if (!node_) {
    throw InvalidParameter("DemandDistribution: null implementation node");
  }
}

double DemandDistribution::survival(double x) const {
  return node_->survival(x);
}

bool DemandDistribution::has_density() const noexcept {
  return node_->has_density();
}

double DemandDistribution::density(double x) const {
  return node_->density(x);
}

double DemandDistribution::support_lower() const noexcept {
  return node_->lower();
}

double DemandDistribution::support_upper() const noexcept {
  return node_->upper();
}

std::string DemandDistribution::label() const { return node_->describe(); }

double DemandDistribution::tail_integral(double x,
                                         const NumericConfig& cfg) const {
  return node_->tail(x, cfg);
}

double DemandDistribution::mean(const NumericConfig& cfg) const {
  return node_->mean(cfg);
}

double DemandDistribution::quantile(double q, const NumericConfig& cfg) const {
  return node_->quantile(q, cfg);
}

std::vector<double> DemandDistribution::sample(std::uint64_t seed,
                                               std::size_t n,
                                               const NumericConfig& cfg) const {
  std::vector<double> out;
  out.reserve(n);
  const std::uint64_t partitions =
      (n + detail::kPartitionSize - 1) / detail::kPartitionSize;
  for (std::uint64_t part = 0; part < partitions; ++part) {
    detail::Rng rng(detail::derive_seed(seed, part));
    const std::uint64_t begin = part * detail::kPartitionSize;
    const std::uint64_t end =
        std::min<std::uint64_t>(begin + detail::kPartitionSize, n);
    for (std::uint64_t i = begin; i < end; ++i) {
      out.push_back(node_->draw(rng, cfg));
    }
  }
  return out;
}

}  // namespace demand
