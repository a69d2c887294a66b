#include "demand/families.hpp"

#include <algorithm>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <cstdio>
#include <limits>

#include "demand/errors.hpp"
#include "node.hpp"

namespace demand {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSqrt2 = 1.4142135623730950488016887;
constexpr double kInvSqrt2Pi = 0.3989422804014326779399461;
constexpr double kPi = 3.1415926535897932384626434;

std::string fmt(const char* pattern, double v1, double v2 = 0.0,
                double v3 = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), pattern, v1, v2, v3);
  return buf;
}

void require(bool ok, const std::string& message) {
  if (!ok) {
    throw InvalidParameter(message);
  }
}

bool finite(double v) { return std::isfinite(v); }

// ---------------------------------------------------------------------------

class UniformNode final : public detail::DistNode {
 public:
  UniformNode(double lo, double hi) : lo_(lo), hi_(hi) {
    require(finite(lo) && finite(hi), "uniform: endpoints must be finite");
    require(lo >= 0.0, "uniform: lower endpoint must be >= 0");
    require(lo < hi, "uniform: requires lo < hi");
  }

  double survival(double x) const override {
    if (x < lo_) return 1.0;
    if (x >= hi_) return 0.0;
    return (hi_ - x) / (hi_ - lo_);
  }
  bool has_density() const noexcept override { return true; }
  double density(double x) const override {
    return (x >= lo_ && x < hi_) ? 1.0 / (hi_ - lo_) : 0.0;
  }
  double lower() const noexcept override { return lo_; }
  double upper() const noexcept override { return hi_; }
  std::string describe() const override {
    return fmt("uniform(L=%g, H=%g)", lo_, hi_);
  }
  double tail(double x, const NumericConfig& cfg) const override {
    if (x >= hi_) return 0.0;
    if (x < lo_) return (lo_ - x) + tail(lo_, cfg);
    const double r = hi_ - x;
    return r * r / (2.0 * (hi_ - lo_));
  }
  double quantile(double q, const NumericConfig&) const override {
    if (!(q >= 0.0 && q < 1.0)) {
      throw InvalidParameter("quantile: q must lie in [0, 1)");
    }
    return lo_ + q * (hi_ - lo_);
  }

 private:
  double lo_;
  double hi_;
};

// ---------------------------------------------------------------------------

class ExponentialNode final : public detail::DistNode {
 public:
  explicit ExponentialNode(double rate) : rate_(rate) {
    require(finite(rate) && rate > 0.0, "exponential: rate must be > 0");
  }

  double survival(double x) const override {
    return x <= 0.0 ? 1.0 : std::exp(-rate_ * x);
  }
  bool has_density() const noexcept override { return true; }
  double density(double x) const override {
    return x < 0.0 ? 0.0 : rate_ * std::exp(-rate_ * x);
  }
  double lower() const noexcept override { return 0.0; }
  double upper() const noexcept override { return kInf; }
  std::string describe() const override {
    return fmt("exponential(rate=%g)", rate_);
  }
  double tail(double x, const NumericConfig&) const override {
    if (x <= 0.0) return -x + 1.0 / rate_;
    return std::exp(-rate_ * x) / rate_;
  }
  double quantile(double q, const NumericConfig&) const override {
    if (!(q >= 0.0 && q < 1.0)) {
      throw InvalidParameter("quantile: q must lie in [0, 1)");
    }
    return -std::log1p(-q) / rate_;
  }

 private:
  double rate_;
};

// ---------------------------------------------------------------------------

class ParetoNode final : public detail::DistNode {
 public:
  ParetoNode(double lo, double k) : lo_(lo), k_(k) {
    require(finite(lo) && lo > 0.0, "pareto1: lower endpoint must be > 0");
    require(finite(k) && k > 1.0,
            "pareto1: shape must exceed 1 (finite mean required)");
  }

  double survival(double x) const override {
    return x <= lo_ ? 1.0 : std::pow(x / lo_, -k_);
  }
  bool has_density() const noexcept override { return true; }
  double density(double x) const override {
    return x < lo_ ? 0.0 : (k_ / lo_) * std::pow(x / lo_, -k_ - 1.0);
  }
  double lower() const noexcept override { return lo_; }
  double upper() const noexcept override { return kInf; }
  std::string describe() const override {
    return fmt("pareto1(L=%g, k=%g)", lo_, k_);
  }
  double tail(double x, const NumericConfig&) const override {
    if (x <= lo_) return (lo_ - x) + lo_ / (k_ - 1.0);
    return x * std::pow(x / lo_, -k_) / (k_ - 1.0);
  }
  double quantile(double q, const NumericConfig&) const override {
    if (!(q >= 0.0 && q < 1.0)) {
      throw InvalidParameter("quantile: q must lie in [0, 1)");
    }
    return lo_ * std::pow(1.0 - q, -1.0 / k_);
  }

 private:
  double lo_;
  double k_;
};

// ---------------------------------------------------------------------------

class LomaxNode final : public detail::DistNode {
 public:
  LomaxNode(double a, double b, double k) : a_(a), b_(b), k_(k) {
    require(finite(a) && a >= 0.0, "lomax: location must be >= 0");
    require(finite(b) && b > 0.0, "lomax: scale must be > 0");
    require(finite(k) && k > 1.0,
            "lomax: shape must exceed 1 (finite mean required)");
  }

  double survival(double x) const override {
    return x <= a_ ? 1.0 : std::pow(b_ / (x - a_ + b_), k_);
  }
  bool has_density() const noexcept override { return true; }
  double density(double x) const override {
    if (x < a_) return 0.0;
    return (k_ / b_) * std::pow(b_ / (x - a_ + b_), k_ + 1.0);
  }
  double lower() const noexcept override { return a_; }
  double upper() const noexcept override { return kInf; }
  std::string describe() const override {
    return fmt("lomax(A=%g, B=%g, k=%g)", a_, b_, k_);
  }
  double tail(double x, const NumericConfig&) const override {
    if (x <= a_) return (a_ - x) + b_ / (k_ - 1.0);
    return (x - a_ + b_) * std::pow(b_ / (x - a_ + b_), k_) / (k_ - 1.0);
  }
  double quantile(double q, const NumericConfig&) const override {
    if (!(q >= 0.0 && q < 1.0)) {
      throw InvalidParameter("quantile: q must lie in [0, 1)");
    }
    return a_ + b_ * (std::pow(1.0 - q, -1.0 / k_) - 1.0);
  }

 private:
  double a_;
  double b_;
  double k_;
};

// ---------------------------------------------------------------------------

class BirnbaumSaundersNode final : public detail::DistNode {
 public:
  BirnbaumSaundersNode(double a, double beta) : a_(a), beta_(beta) {
    require(finite(a) && a > 0.0, "birnbaum_saunders: shape must be > 0");
    require(finite(beta) && beta > 0.0,
            "birnbaum_saunders: scale must be > 0");
  }

  double survival(double x) const override {
    if (x <= 0.0) return 1.0;
    // Standard-normal tail at xi(x), via erfc (good to ~1e-16 everywhere).
    return 0.5 * std::erfc(xi(x) / kSqrt2);
  }
  bool has_density() const noexcept override { return true; }
  double density(double x) const override {
    if (x <= 0.0) return 0.0;
    const double z = xi(x);
    const double dxi = (1.0 / (2.0 * a_)) *
                       (1.0 / std::sqrt(x * beta_) +
                        std::sqrt(beta_) / (x * std::sqrt(x)));
    return kInvSqrt2Pi * std::exp(-0.5 * z * z) * dxi;
  }
  double lower() const noexcept override { return 0.0; }
  double upper() const noexcept override { return kInf; }
  std::string describe() const override {
    return fmt("birnbaum_saunders(a=%g, beta=%g)", a_, beta_);
  }
  double quantile(double q, const NumericConfig&) const override {
    if (!(q >= 0.0 && q < 1.0)) {
      throw InvalidParameter("quantile: q must lie in [0, 1)");
    }
    if (q == 0.0) return 0.0;
    // z = Phi^{-1}(q); then invert xi(x) = z.
    const double z = -kSqrt2 * boost::math::erfc_inv(2.0 * q);
    const double az = a_ * z;
    const double root = 0.5 * (az + std::sqrt(az * az + 4.0));
    return beta_ * root * root;
  }
  // tail(): no closed form; the generic quadrature default applies.

 private:
  double xi(double x) const {
    const double s = std::sqrt(x / beta_);
    return (s - 1.0 / s) / a_;
  }

  double a_;
  double beta_;
};

// ---------------------------------------------------------------------------

class LogLogisticNode final : public detail::DistNode {
 public:
  LogLogisticNode(double k, double s) : k_(k), s_(s) {
    require(finite(k) && k > 1.0,
            "loglogistic: shape must exceed 1 (finite mean required)");
    require(finite(s) && s > 0.0, "loglogistic: scale must be > 0");
    tail_coeff_ = (s_ / k_) * kPi / std::sin(kPi / k_);
  }

  double survival(double x) const override {
    if (x <= 0.0) return 1.0;
    return 1.0 / (1.0 + std::pow(x / s_, k_));
  }
  bool has_density() const noexcept override { return true; }
  double density(double x) const override {
    if (x <= 0.0) return 0.0;
    const double w = std::pow(x / s_, k_);
    const double d = 1.0 + w;
    return (k_ / x) * w / (d * d);
  }
  double lower() const noexcept override { return 0.0; }
  double upper() const noexcept override { return kInf; }
  std::string describe() const override {
    return fmt("loglogistic(k=%g, scale=%g)", k_, s_);
  }
  double tail(double x, const NumericConfig&) const override {
    if (x <= 0.0) return -x + tail_coeff_;
    // integral of 1/(1+(t/s)^k) over [x, inf) reduces to a regularized
    // incomplete beta with parameters (1/k, 1 - 1/k).
    const double w = std::pow(x / s_, k_);
    const double z = w / (1.0 + w);
    return tail_coeff_ * boost::math::ibetac(1.0 / k_, 1.0 - 1.0 / k_, z);
  }
  double quantile(double q, const NumericConfig&) const override {
    if (!(q >= 0.0 && q < 1.0)) {
      throw InvalidParameter("quantile: q must lie in [0, 1)");
    }
    if (q == 0.0) return 0.0;
    return s_ * std::pow(q / (1.0 - q), 1.0 / k_);
  }

 private:
  double k_;
  double s_;
  double tail_coeff_;  // (s/k) * Beta(1/k, 1 - 1/k) = mean
};

// ---------------------------------------------------------------------------

class WeibullNode final : public detail::DistNode {
 public:
  WeibullNode(double c, double s) : c_(c), s_(s) {
    require(finite(c) && c > 0.0, "weibull: shape must be > 0");
    require(finite(s) && s > 0.0, "weibull: scale must be > 0");
    tail_coeff_ = (s_ / c_) * boost::math::tgamma(1.0 / c_);
  }

  double survival(double x) const override {
    if (x <= 0.0) return 1.0;
    return std::exp(-std::pow(x / s_, c_));
  }
  bool has_density() const noexcept override { return true; }
  double density(double x) const override {
    if (x <= 0.0) return 0.0;
    const double y = std::pow(x / s_, c_);
    return (c_ / x) * y * std::exp(-y);
  }
  double lower() const noexcept override { return 0.0; }
  double upper() const noexcept override { return kInf; }
  std::string describe() const override {
    return fmt("weibull(shape=%g, scale=%g)", c_, s_);
  }
  double tail(double x, const NumericConfig&) const override {
    if (x <= 0.0) return -x + tail_coeff_;
    const double y = std::pow(x / s_, c_);
    return tail_coeff_ * boost::math::gamma_q(1.0 / c_, y);
  }
  double quantile(double q, const NumericConfig&) const override {
    if (!(q >= 0.0 && q < 1.0)) {
      throw InvalidParameter("quantile: q must lie in [0, 1)");
    }
    if (q == 0.0) return 0.0;
    return s_ * std::pow(-std::log1p(-q), 1.0 / c_);
  }

 private:
  double c_;
  double s_;
  double tail_coeff_;  // (s/c) * Gamma(1/c) = mean
};

// ---------------------------------------------------------------------------

class GammaNode final : public detail::DistNode {
 public:
  GammaNode(double a, double s) : a_(a), s_(s) {
    require(finite(a) && a > 0.0, "gamma: shape must be > 0");
    require(finite(s) && s > 0.0, "gamma: scale must be > 0");
  }

  double survival(double x) const override {
    if (x <= 0.0) return 1.0;
    return boost::math::gamma_q(a_, x / s_);
  }
  bool has_density() const noexcept override { return true; }
  double density(double x) const override {
    if (x <= 0.0) return 0.0;
    return boost::math::gamma_p_derivative(a_, x / s_) / s_;
  }
  double lower() const noexcept override { return 0.0; }
  double upper() const noexcept override { return kInf; }
  std::string describe() const override {
    return fmt("gamma(shape=%g, scale=%g)", a_, s_);
  }
  double tail(double x, const NumericConfig&) const override {
    if (x <= 0.0) return -x + a_ * s_;
    const double y = x / s_;
    // E (X - x)_+ ; the two upper-tail terms share their leading order, so
    // precision degrades like eps * (x/s) — harmless at the depths the
    // library probes (survival >= 1e-12).
    return a_ * s_ * boost::math::gamma_q(a_ + 1.0, y) -
           x * boost::math::gamma_q(a_, y);
  }
  double quantile(double q, const NumericConfig&) const override {
    if (!(q >= 0.0 && q < 1.0)) {
      throw InvalidParameter("quantile: q must lie in [0, 1)");
    }
    if (q == 0.0) return 0.0;
    return s_ * boost::math::gamma_p_inv(a_, q);
  }

 private:
  double a_;
  double s_;
};

}  // namespace

namespace families {

DemandDistribution uniform(double lo, double hi) {
  return DemandDistribution(std::make_shared<UniformNode>(lo, hi));
}
DemandDistribution exponential(double rate) {
  return DemandDistribution(std::make_shared<ExponentialNode>(rate));
}
DemandDistribution pareto1(double lower, double shape) {
  return DemandDistribution(std::make_shared<ParetoNode>(lower, shape));
}
DemandDistribution lomax(double location, double scale, double shape) {
  return DemandDistribution(
      std::make_shared<LomaxNode>(location, scale, shape));
}
DemandDistribution birnbaum_saunders(double shape, double scale) {
  return DemandDistribution(
      std::make_shared<BirnbaumSaundersNode>(shape, scale));
}
DemandDistribution loglogistic(double shape, double scale) {
  return DemandDistribution(std::make_shared<LogLogisticNode>(shape, scale));
}
DemandDistribution weibull(double shape, double scale) {
  return DemandDistribution(std::make_shared<WeibullNode>(shape, scale));
}
DemandDistribution gamma(double shape, double scale) {
  return DemandDistribution(std::make_shared<GammaNode>(shape, scale));
}

}  // namespace families

const std::vector<std::pair<std::string, std::vector<std::string>>>&
family_registry() {
  static const std::vector<std::pair<std::string, std::vector<std::string>>>
      registry = {
          {"uniform", {"L", "H"}},
          {"exponential", {"rate"}},
          {"pareto1", {"L", "k"}},
          {"lomax", {"A", "B", "k"}},
          {"birnbaum_saunders", {"a", "beta"}},
          {"loglogistic", {"k", "scale"}},
          {"weibull", {"shape", "scale"}},
          {"gamma", {"shape", "scale"}},
      };
  return registry;
}

DemandDistribution make_family(const std::string& name,
                               const std::map<std::string, double>& params) {
  const std::vector<std::string>* expected = nullptr;
  for (const auto& [family, keys] : family_registry()) {
    if (family == name) {
      expected = &keys;
      break;
    }
  }
  if (expected == nullptr) {
    throw InvalidParameter("unknown family '" + name + "'");
  }
  for (const auto& key : *expected) {
    if (params.find(key) == params.end()) {
      throw InvalidParameter("family '" + name + "': missing parameter '" +
                             key + "'");
    }
  }
  for (const auto& [key, value] : params) {
    (void)value;
    if (std::find(expected->begin(), expected->end(), key) ==
        expected->end()) {
      throw InvalidParameter("family '" + name + "': unexpected parameter '" +
                             key + "'");
    }
  }
  const auto arg = [&](const char* key) { return params.at(key); };

  if (name == "uniform") return families::uniform(arg("L"), arg("H"));
  if (name == "exponential") return families::exponential(arg("rate"));
  if (name == "pareto1") return families::pareto1(arg("L"), arg("k"));
  if (name == "lomax") return families::lomax(arg("A"), arg("B"), arg("k"));
  if (name == "birnbaum_saunders") {
    return families::birnbaum_saunders(arg("a"), arg("beta"));
  }
  if (name == "loglogistic") {
    return families::loglogistic(arg("k"), arg("scale"));
  }
  if (name == "weibull") return families::weibull(arg("shape"), arg("scale"));
  return families::gamma(arg("shape"), arg("scale"));
}

}  // namespace demand
