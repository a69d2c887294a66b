#include "demand/combinators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <utility>

#include "demand/errors.hpp"
#include "node.hpp"

namespace demand {
namespace {

using detail::DistNode;
using detail::NodePtr;

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt_g(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

// ---------------------------------------------------------------------------

class MixtureNode final : public DistNode {
 public:
  MixtureNode(std::vector<NodePtr> components, std::vector<double> weights)
      : components_(std::move(components)), weights_(std::move(weights)) {
    if (components_.empty()) {
      throw InvalidParameter("mixture: at least one component required");
    }
    if (components_.size() != weights_.size()) {
      throw InvalidParameter(
          "mixture: component and weight counts must match");
    }
    double sum = 0.0;
    for (double w : weights_) {
      if (!(std::isfinite(w) && w >= 0.0)) {
        throw InvalidParameter("mixture: weights must be nonnegative");
      }
      sum += w;
    }
    if (std::fabs(sum - 1.0) > 1e-12) {
      throw InvalidParameter("mixture: weights must sum to 1 (got " +
                             fmt_g(sum) + ")");
    }
    lower_ = kInf;
    upper_ = -kInf;
    density_ = true;
    for (const auto& c : components_) {
      lower_ = std::min(lower_, c->lower());
      upper_ = std::max(upper_, c->upper());
      density_ = density_ && c->has_density();
    }
  }

  double survival(double x) const override {
    double s = 0.0;
    for (std::size_t i = 0; i < components_.size(); ++i) {
      s += weights_[i] * components_[i]->survival(x);
    }
    return s;
  }
  bool has_density() const noexcept override { return density_; }
  double density(double x) const override {
    double f = 0.0;
    for (std::size_t i = 0; i < components_.size(); ++i) {
      f += weights_[i] * components_[i]->density(x);
    }
    return f;
  }
  double lower() const noexcept override { return lower_; }
  double upper() const noexcept override { return upper_; }
  std::string describe() const override {
    std::string s = "mixture(w=[";
    for (std::size_t i = 0; i < weights_.size(); ++i) {
      if (i > 0) s += ", ";
      s += fmt_g(weights_[i]);
    }
    s += "]; ";
    for (std::size_t i = 0; i < components_.size(); ++i) {
      if (i > 0) s += ", ";
      s += components_[i]->describe();
    }
    return s + ")";
  }
  double tail(double x, const NumericConfig& cfg) const override {
    double t = 0.0;
    for (std::size_t i = 0; i < components_.size(); ++i) {
      t += weights_[i] * components_[i]->tail(x, cfg);
    }
    return t;
  }
  double draw(detail::Rng& rng, const NumericConfig& cfg) const override {
    const double u = rng.uniform01();
    double cum = 0.0;
    for (std::size_t i = 0; i < components_.size(); ++i) {
      cum += weights_[i];
      if (u <= cum) {
        return components_[i]->draw(rng, cfg);
      }
    }
    return components_.back()->draw(rng, cfg);
  }
  void collect_breakpoints(std::vector<double>& out) const override {
    for (const auto& c : components_) {
      c->collect_breakpoints(out);
    }
  }

 private:
  std::vector<NodePtr> components_;
  std::vector<double> weights_;
  double lower_;
  double upper_;
  bool density_;
};

// ---------------------------------------------------------------------------

class ScaleNode final : public DistNode {
 public:
  ScaleNode(NodePtr child, double factor)
      : child_(std::move(child)), factor_(factor) {
    if (!(std::isfinite(factor) && factor > 0.0)) {
      throw InvalidParameter("scale: factor must be positive and finite");
    }
  }

  double survival(double x) const override {
    return child_->survival(x / factor_);
  }
  bool has_density() const noexcept override { return child_->has_density(); }
  double density(double x) const override {
    return child_->density(x / factor_) / factor_;
  }
  double lower() const noexcept override { return factor_ * child_->lower(); }
  double upper() const noexcept override { return factor_ * child_->upper(); }
  std::string describe() const override {
    return "scale(" + child_->describe() + ", " + fmt_g(factor_) + ")";
  }
  double tail(double x, const NumericConfig& cfg) const override {
    return factor_ * child_->tail(x / factor_, cfg);
  }
  double quantile(double q, const NumericConfig& cfg) const override {
    return factor_ * child_->quantile(q, cfg);
  }
  double draw(detail::Rng& rng, const NumericConfig& cfg) const override {
    return factor_ * child_->draw(rng, cfg);
  }
  void collect_breakpoints(std::vector<double>& out) const override {
    std::vector<double> inner;
    child_->collect_breakpoints(inner);
    for (double x : inner) {
      if (std::isfinite(x)) {
        out.push_back(factor_ * x);
      }
    }
  }

 private:
  NodePtr child_;
  double factor_;
};

// ---------------------------------------------------------------------------

class ShiftNode final : public DistNode {
 public:
  ShiftNode(NodePtr child, double offset)
      : child_(std::move(child)), offset_(offset) {
    if (!std::isfinite(offset)) {
      throw InvalidParameter("shift: offset must be finite");
    }
    if (child_->lower() + offset < 0.0) {
      throw InvalidParameter(
          "shift: resulting support would extend below zero");
    }
  }

  double survival(double x) const override {
    return child_->survival(x - offset_);
  }
  bool has_density() const noexcept override { return child_->has_density(); }
  double density(double x) const override {
    return child_->density(x - offset_);
  }
  double lower() const noexcept override { return child_->lower() + offset_; }
  double upper() const noexcept override { return child_->upper() + offset_; }
  std::string describe() const override {
    return "shift(" + child_->describe() + ", " + fmt_g(offset_) + ")";
  }
  double tail(double x, const NumericConfig& cfg) const override {
    return child_->tail(x - offset_, cfg);
  }
  double quantile(double q, const NumericConfig& cfg) const override {
    return offset_ + child_->quantile(q, cfg);
  }
  double draw(detail::Rng& rng, const NumericConfig& cfg) const override {
    return offset_ + child_->draw(rng, cfg);
  }
  void collect_breakpoints(std::vector<double>& out) const override {
    std::vector<double> inner;
    child_->collect_breakpoints(inner);
    for (double x : inner) {
      if (std::isfinite(x)) {
        out.push_back(x + offset_);
      }
    }
  }

 private:
  NodePtr child_;
  double offset_;
};

// ---------------------------------------------------------------------------

class TruncateNode final : public DistNode {
 public:
  TruncateNode(NodePtr child, double at) : child_(std::move(child)), at_(at) {
    if (!std::isfinite(at) || !(at > child_->lower()) ||
        !(at < child_->upper())) {
      throw InvalidParameter(
          "left_truncate: point must lie strictly inside the support");
    }
    keep_ = child_->survival(at);
    if (!(keep_ > 1e-300)) {
      throw BeyondNumericalSupport(
          "left_truncate: survival at the truncation point underflows");
    }
  }

  double survival(double x) const override {
    if (x < at_) return 1.0;
    return child_->survival(x) / keep_;
  }
  bool has_density() const noexcept override { return child_->has_density(); }
  double density(double x) const override {
    if (x < at_) return 0.0;
    return child_->density(x) / keep_;
  }
  double lower() const noexcept override { return at_; }
  double upper() const noexcept override { return child_->upper(); }
  std::string describe() const override {
    return "left_truncate(" + child_->describe() + ", " + fmt_g(at_) + ")";
  }
  double tail(double x, const NumericConfig& cfg) const override {
    if (x < at_) {
      return (at_ - x) + child_->tail(at_, cfg) / keep_;
    }
    return child_->tail(x, cfg) / keep_;
  }
  double quantile(double q, const NumericConfig& cfg) const override {
    if (!(q >= 0.0 && q < 1.0)) {
      throw InvalidParameter("quantile: q must lie in [0, 1)");
    }
    // F_trunc(x) = q  <=>  F_child(x) = 1 - keep * (1 - q).
    return child_->quantile(1.0 - keep_ * (1.0 - q), cfg);
  }
  void collect_breakpoints(std::vector<double>& out) const override {
    out.push_back(at_);
    std::vector<double> inner;
    child_->collect_breakpoints(inner);
    for (double x : inner) {
      if (std::isfinite(x) && x > at_) {
        out.push_back(x);
      }
    }
  }

 private:
  NodePtr child_;
  double at_;
  double keep_;  // child survival at the truncation point
};

// ---------------------------------------------------------------------------

class TransformNode final : public DistNode {
 public:
  TransformNode(NodePtr child, std::function<double(double)> phi,
                std::function<double(double)> phi_inv,
                std::function<double(double)> phi_deriv, std::string name)
      : child_(std::move(child)),
        phi_(std::move(phi)),
        phi_inv_(std::move(phi_inv)),
        phi_deriv_(std::move(phi_deriv)),
        name_(std::move(name)) {
    if (!phi_ || !phi_inv_) {
      throw InvalidParameter(name_ + ": phi and phi_inv are both required");
    }
    lower_ = phi_(child_->lower());
    upper_ = std::isfinite(child_->upper()) ? phi_(child_->upper()) : kInf;
    if (!(lower_ >= 0.0) || !(lower_ < upper_)) {
      throw InvalidParameter(
          name_ + ": phi must map the support onto a nonnegative interval");
    }
    spot_check_inverse();
  }

  double survival(double y) const override {
    if (y <= lower_) return 1.0;
    if (std::isfinite(upper_) && y >= upper_) return 0.0;
    return child_->survival(phi_inv_(y));
  }
  bool has_density() const noexcept override {
    return static_cast<bool>(phi_deriv_) && child_->has_density();
  }
  double density(double y) const override {
    if (!phi_deriv_) {
      throw MissingDensity("density unavailable for " + describe() +
                           " (no derivative registered)");
    }
    if (y < lower_ || (std::isfinite(upper_) && y >= upper_)) {
      return 0.0;
    }
    const double x = phi_inv_(y);
    return child_->density(x) / phi_deriv_(x);
  }
  double lower() const noexcept override { return lower_; }
  double upper() const noexcept override { return upper_; }
  std::string describe() const override {
    return name_ + "(" + child_->describe() + ")";
  }
  double quantile(double q, const NumericConfig& cfg) const override {
    return phi_(child_->quantile(q, cfg));
  }
  void collect_breakpoints(std::vector<double>& out) const override {
    std::vector<double> inner;
    child_->collect_breakpoints(inner);
    for (double x : inner) {
      if (std::isfinite(x)) {
        out.push_back(phi_(x));
      }
    }
  }

 private:
  void spot_check_inverse() const {
    const NumericConfig cfg;
    for (int i = 1; i <= 19; ++i) {
      const double q = i / 20.0;
      const double y = phi_(child_->quantile(q, cfg));
      const double roundtrip = phi_(phi_inv_(y));
      if (!(std::fabs(roundtrip - y) <=
            1e-8 * std::max(1.0, std::fabs(y)))) {
        throw InverseMismatch(name_ +
                              ": phi(phi_inv(y)) != y at y = " + fmt_g(y));
      }
    }
  }

  NodePtr child_;
  std::function<double(double)> phi_;
  std::function<double(double)> phi_inv_;
  std::function<double(double)> phi_deriv_;
  std::string name_;
  double lower_;
  double upper_;
};

// ---------------------------------------------------------------------------

class ConvolveNode final : public DistNode {
 public:
  ConvolveNode(NodePtr a, NodePtr b, const NumericConfig& cfg)
      : a_(std::move(a)), b_(std::move(b)), cfg_(cfg) {
    cfg_.validate();
    if (!a_->has_density()) {
      throw MissingDensity(
          "convolve: the first operand must carry a density");
    }
    if (a_->lower() < 0.0 || b_->lower() < 0.0) {
      throw InvalidParameter("convolve: supports must be nonnegative");
    }
    a_->collect_breakpoints(a_breaks_);
  }

  double survival(double t) const override {
    const double lo = lower();
    if (t <= lo) return 1.0;
    const double hi = upper();
    if (std::isfinite(hi) && t >= hi) return 0.0;

    // P(X+Y > t) = survival_a(t) + integral of f_a(u) survival_b(t-u) over
    // u up to t. Tolerances are purely relative: values range over many
    // orders of magnitude along a tail.
    quad::Options opts = conv_options();
    const double u_hi = std::min(a_->upper(), t);
    std::vector<double> bp = a_breaks_;
    reflect_b_breakpoints(t, bp);
    const auto f = [&](double u) {
      return a_->density(u) * b_->survival(t - u);
    };
    const double integral = quad::integrate(f, a_->lower(), u_hi, opts, bp);
    return std::min(1.0, a_->survival(t) + integral);
  }
  bool has_density() const noexcept override { return false; }
  double lower() const noexcept override {
    return a_->lower() + b_->lower();
  }
  double upper() const noexcept override {
    return a_->upper() + b_->upper();
  }
  std::string describe() const override {
    return "convolve(" + a_->describe() + ", " + b_->describe() + ")";
  }
  double tail(double x, const NumericConfig& cfg) const override {
    const double lo = lower();
    if (x <= lo) {
      // survival is 1 below the joint support; beyond that the full
      // expected excess applies.
      return (a_->mean(cfg) + b_->mean(cfg)) - x;
    }
    // E (X+Y-x)_+ = E_X[ t_b(x - X) ] with t_b the expected excess of Y,
    // linearly extended below Y's support.
    quad::Options opts = conv_options();
    std::vector<double> bp = a_breaks_;
    reflect_b_breakpoints(x, bp);
    const auto f = [&, x](double u) {
      return a_->density(u) * b_->tail(x - u, cfg_);
    };
    const double a_hi = a_->upper();
    if (std::isfinite(a_hi)) {
      return quad::integrate(f, a_->lower(), a_hi, opts, bp);
    }
    const double span =
        (a_->mean(cfg) - a_->lower()) + (b_->mean(cfg) - b_->lower());
    return quad::integrate_upper(f, a_->lower(), opts, bp,
                                 std::max(1e-6, span));
  }
  double draw(detail::Rng& rng, const NumericConfig& cfg) const override {
    const double x = a_->draw(rng, cfg);
    const double y = b_->draw(rng, cfg);
    return x + y;
  }

 private:
  quad::Options conv_options() const {
    quad::Options opts = detail::quad_options(cfg_);
    opts.abs_tol = 1e-305;
    return opts;
  }
  // Kinks of the inner integrand caused by operand b: u such that t - u hits
  // one of b's breakpoints.
  void reflect_b_breakpoints(double t, std::vector<double>& bp) const {
    std::vector<double> b_breaks;
    b_->collect_breakpoints(b_breaks);
    for (double v : b_breaks) {
      if (std::isfinite(v)) {
        bp.push_back(t - v);
      }
    }
  }

  NodePtr a_;
  NodePtr b_;
  NumericConfig cfg_;
  std::vector<double> a_breaks_;
};

}  // namespace

// ---------------------------------------------------------------------------

DemandDistribution mixture(const std::vector<DemandDistribution>& components,
                           const std::vector<double>& weights) {
  std::vector<NodePtr> nodes;
  nodes.reserve(components.size());
  for (const auto& c : components) {
    nodes.push_back(c.node_ptr());
  }
  return DemandDistribution(
      std::make_shared<MixtureNode>(std::move(nodes), weights));
}

DemandDistribution scale(const DemandDistribution& d, double factor) {
  return DemandDistribution(
      std::make_shared<ScaleNode>(d.node_ptr(), factor));
}

DemandDistribution shift(const DemandDistribution& d, double offset) {
  return DemandDistribution(
      std::make_shared<ShiftNode>(d.node_ptr(), offset));
}

DemandDistribution left_truncate(const DemandDistribution& d, double at) {
  return DemandDistribution(std::make_shared<TruncateNode>(d.node_ptr(), at));
}

DemandDistribution monotone_transform(const DemandDistribution& d,
                                      std::function<double(double)> phi,
                                      std::function<double(double)> phi_inv,
                                      std::function<double(double)> phi_deriv,
                                      const std::string& name) {
  return DemandDistribution(std::make_shared<TransformNode>(
      d.node_ptr(), std::move(phi), std::move(phi_inv), std::move(phi_deriv),
      name));
}

DemandDistribution power_transform(const DemandDistribution& d,
                                   double exponent) {
  if (!(std::isfinite(exponent) && exponent > 0.0 && exponent <= 1.0)) {
    throw InvalidParameter(
        "power: exponent must lie in (0, 1] (the concave case)");
  }
  if (d.support_lower() < 0.0) {
    throw InvalidParameter("power: requires nonnegative support");
  }
  const double e = exponent;
  char buf[48];
  std::snprintf(buf, sizeof(buf), "power(e=%g)", e);
  return monotone_transform(
      d, [e](double x) { return std::pow(x, e); },
      [e](double y) { return std::pow(y, 1.0 / e); },
      [e](double x) { return e * std::pow(x, e - 1.0); }, buf);
}

DemandDistribution convolve(const DemandDistribution& d1,
                            const DemandDistribution& d2,
                            const NumericConfig& cfg) {
  return DemandDistribution(
      std::make_shared<ConvolveNode>(d1.node_ptr(), d2.node_ptr(), cfg));
}

}  // namespace demand
