#include "demand/config.hpp"

#include "demand/errors.hpp"

namespace demand {

void NumericConfig::validate() const {
  if (!(quad_abs_tol > 0.0)) {
    throw InvalidParameter("NumericConfig: quad_abs_tol must be positive");
  }
  if (!(quad_rel_tol > 0.0)) {
    throw InvalidParameter("NumericConfig: quad_rel_tol must be positive");
  }
  if (!(mono_slack > 0.0)) {
    throw InvalidParameter("NumericConfig: mono_slack must be positive");
  }
  if (grid_points < 16) {
    throw InvalidParameter("NumericConfig: grid_points must be at least 16");
  }
  if (!(root_tol > 0.0)) {
    throw InvalidParameter("NumericConfig: root_tol must be positive");
  }
  if (tail_probe_max_doublings < 4) {
    throw InvalidParameter(
        "NumericConfig: tail_probe_max_doublings must be at least 4");
  }
  if (!(tail_agree_tol > 0.0)) {
    throw InvalidParameter("NumericConfig: tail_agree_tol must be positive");
  }
}

}  // namespace demand
