// demand — analyze, price, and validate stochastic linear-demand markets
// described by distribution spec files.
//
// Commands: analyze, price, curve, validate. Exit codes: 0 ok, 2 spec or
// usage error, 3 numerical failure, 4 no finite maximizer, 5 missing density,
// 6 validation failure.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "demand/classify.hpp"
#include "demand/config.hpp"
#include "demand/dist_spec.hpp"
#include "demand/distribution.hpp"
#include "demand/errors.hpp"
#include "demand/mc.hpp"
#include "demand/pricing.hpp"
#include "demand/reliability.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSpecError = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitNoFiniteMaximizer = 4;
constexpr int kExitMissingDensity = 5;
constexpr int kExitValidationFailure = 6;

struct Options {
  std::string spec_path;
  std::string out_path;
  std::vector<std::string> overrides;  // --set KEY=VALUE
  std::size_t grid = 0;                // --grid N (0 = keep config value)
  std::uint64_t seed = 42;
  std::size_t n = 1000000;
  std::string functions;  // curve only
};

void apply_override(demand::NumericConfig& cfg, const std::string& kv) {
  const auto eq = kv.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw demand::InvalidParameter("--set expects KEY=VALUE, got '" + kv +
                                   "'");
  }
  const std::string key = kv.substr(0, eq);
  const std::string value = kv.substr(eq + 1);
  std::istringstream in(value);
  double num = 0.0;
  std::string trailing;
  if (!(in >> num) || (in >> trailing)) {
    throw demand::InvalidParameter("--set " + key + ": '" + value +
                                   "' is not a number");
  }
  if (key == "quad_abs_tol") {
    cfg.quad_abs_tol = num;
  } else if (key == "quad_rel_tol") {
    cfg.quad_rel_tol = num;
  } else if (key == "mono_slack") {
    cfg.mono_slack = num;
  } else if (key == "grid_points") {
    cfg.grid_points = static_cast<std::size_t>(num);
  } else if (key == "root_tol") {
    cfg.root_tol = num;
  } else if (key == "tail_probe_max_doublings") {
    cfg.tail_probe_max_doublings = static_cast<std::size_t>(num);
  } else if (key == "tail_agree_tol") {
    cfg.tail_agree_tol = num;
  } else {
    throw demand::InvalidParameter("--set: unknown config key '" + key + "'");
  }
}

demand::NumericConfig make_config(const Options& opt) {
  demand::NumericConfig cfg;
  for (const std::string& kv : opt.overrides) apply_override(cfg, kv);
  if (opt.grid != 0) cfg.grid_points = opt.grid;
  cfg.validate();
  return cfg;
}

demand::DemandDistribution load_spec(const std::string& path,
                                     const demand::NumericConfig& cfg) {
  std::ifstream in(path);
  if (!in) {
    throw demand::ParseError("cannot open spec file '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return demand::DistSpec::parse(buf.str()).build(cfg);
}

void write_output(const Options& opt, const std::string& content) {
  if (opt.out_path.empty()) {
    std::cout << content;
    if (!content.empty() && content.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(opt.out_path);
  if (!out) {
    throw demand::ParseError("cannot write to '" + opt.out_path + "'");
  }
  out << content;
}

int run_analyze(const Options& opt) {
  const demand::NumericConfig cfg = make_config(opt);
  const demand::DemandDistribution dist = load_spec(opt.spec_path, cfg);
  const demand::ClassificationReport report = demand::classify(dist, cfg);
  write_output(opt, demand::classification_json(report));
  return kExitOk;
}

int run_price(const Options& opt) {
  const demand::NumericConfig cfg = make_config(opt);
  const demand::DemandDistribution dist = load_spec(opt.spec_path, cfg);
  const demand::PricingSolution sol = demand::solve(dist, cfg);
  write_output(opt, demand::pricing_json(sol));
  if (!sol.finite_maximizer) {
    std::cerr << "no-finite-maximizer: expected revenue is still rising at "
                 "the numerical horizon\n";
    return kExitNoFiniteMaximizer;
  }
  return kExitOk;
}

int run_curve(const Options& opt) {
  const demand::NumericConfig cfg = make_config(opt);
  const demand::DemandDistribution dist = load_spec(opt.spec_path, cfg);

  const std::set<std::string> known = {"m", "l", "h", "g", "eps", "R"};
  std::set<std::string> wanted;
  if (opt.functions.empty()) {
    wanted = known;
  } else {
    std::istringstream in(opt.functions);
    std::string token;
    while (std::getline(in, token, ',')) {
      if (token == "r") token = "R";
      if (!known.count(token)) {
        throw demand::InvalidParameter(
            "--functions: unknown function '" + token +
            "' (choose from m,l,h,g,eps,R)");
      }
      wanted.insert(token);
    }
    if (wanted.empty()) {
      throw demand::InvalidParameter("--functions: empty selection");
    }
  }
  const bool explicit_hg =
      !opt.functions.empty() && (wanted.count("h") || wanted.count("g"));
  if (explicit_hg && !dist.has_density()) {
    std::cerr << "missing density: the hazard-based curves h and g need a "
                 "density, and this distribution has none\n";
    return kExitMissingDensity;
  }

  demand::ReliabilityCurves c = demand::curves(dist, cfg);
  constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
  auto blank = [&](std::vector<double>& col) {
    col.assign(c.grid.size(), kNaN);
  };
  if (!wanted.count("m")) blank(c.m_values);
  if (!wanted.count("l")) blank(c.l_values);
  if (!wanted.count("h")) blank(c.h_values);
  if (!wanted.count("g")) blank(c.g_values);
  if (!wanted.count("eps")) blank(c.eps_values);
  if (!wanted.count("R")) blank(c.r_values);
  write_output(opt, demand::curves_csv(c));
  return kExitOk;
}

int run_validate(const Options& opt) {
  const demand::NumericConfig cfg = make_config(opt);
  const demand::DemandDistribution dist = load_spec(opt.spec_path, cfg);
  const double quantiles[] = {0.1, 0.3, 0.5, 0.7, 0.9};
  std::string lines;
  bool all_pass = true;
  std::uint64_t check_seed = opt.seed;
  for (double q : quantiles) {
    const double p = dist.quantile(q, cfg);
    const demand::RevenueCheck check =
        demand::validate_revenue(dist, p, opt.n, check_seed++, cfg);
    lines += demand::revenue_check_json_line(check);
    lines += '\n';
    all_pass = all_pass && check.pass;
  }
  write_output(opt, lines);
  if (!all_pass) {
    std::cerr << "validation failure: at least one z-score exceeded 4\n";
    return kExitValidationFailure;
  }
  return kExitOk;
}

int dispatch(int which, const Options& opt) {
  try {
    switch (which) {
      case 0:
        return run_analyze(opt);
      case 1:
        return run_price(opt);
      case 2:
        return run_curve(opt);
      default:
        return run_validate(opt);
    }
  } catch (const demand::ParseError& e) {
    std::cerr << "spec error: " << e.what() << '\n';
    return kExitSpecError;
  } catch (const demand::InvalidParameter& e) {
    std::cerr << "spec error: " << e.what() << '\n';
    return kExitSpecError;
  } catch (const demand::DomainError& e) {
    std::cerr << "spec error: " << e.what() << '\n';
    return kExitSpecError;
  } catch (const demand::MissingDensity& e) {
    std::cerr << "missing density: " << e.what() << '\n';
    return kExitMissingDensity;
  } catch (const demand::Error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mean-residual-demand analysis, classification, and optimal "
               "pricing for stochastic linear-demand markets"};
  app.require_subcommand(1);
  app.fallthrough(true);

  Options opt;
  app.add_option("--out", opt.out_path, "Write output to PATH instead of stdout")
      ->type_name("PATH");
  app.add_option("--set", opt.overrides,
                 "Override a numeric-config field (KEY=VALUE, repeatable)")
      ->type_name("KEY=VALUE");
  app.add_option("--grid", opt.grid, "Number of grid points")->type_name("N");
  app.add_option("--seed", opt.seed, "Random seed for validation draws")
      ->type_name("S");
  app.add_option("--n", opt.n, "Number of Monte-Carlo draws")->type_name("N");

  CLI::App* analyze = app.add_subcommand(
      "analyze", "Classify shape properties, tail limits, and moments");
  CLI::App* price = app.add_subcommand(
      "price", "Solve for the optimal price and expected revenue");
  CLI::App* curve = app.add_subcommand(
      "curve", "Emit reliability curves (m,l,h,g,eps,R) as CSV");
  CLI::App* validate = app.add_subcommand(
      "validate", "Monte-Carlo check of analytic revenue at five quantiles");

  std::string spec_analyze, spec_price, spec_curve, spec_validate;
  analyze->add_option("spec", spec_analyze, "Distribution spec JSON file")
      ->required();
  price->add_option("spec", spec_price, "Distribution spec JSON file")
      ->required();
  curve->add_option("spec", spec_curve, "Distribution spec JSON file")
      ->required();
  validate->add_option("spec", spec_validate, "Distribution spec JSON file")
      ->required();
  curve->add_option("--functions", opt.functions,
                    "Comma-separated subset of m,l,h,g,eps,R (default: all)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitSpecError;
  }

  if (analyze->parsed()) {
    opt.spec_path = spec_analyze;
    return dispatch(0, opt);
  }
  if (price->parsed()) {
    opt.spec_path = spec_price;
    return dispatch(1, opt);
  }
  if (curve->parsed()) {
    opt.spec_path = spec_curve;
    return dispatch(2, opt);
  }
  opt.spec_path = spec_validate;
  return dispatch(3, opt);
}
