#pragma once

#include <memory>
#include <string>

#include "demand/config.hpp"
#include "demand/distribution.hpp"

namespace demand {

namespace detail {
struct SpecNode;
}

// A validated, tree-structured distribution description, round-trippable
// through JSON. Grammar:
//
//   leaf:        {"family": "pareto1", "L": 1.0, "k": 3.0}
//                (parameter keys per family_registry())
//   combinators: {"op": "mixture", "weights": [...], "components": [...]}
//                {"op": "scale", "factor": 2.0, "of": <spec>}
//                {"op": "shift", "offset": 1.0, "of": <spec>}
//                {"op": "truncate_left", "at": 2.0, "of": <spec>}
//                {"op": "power", "exponent": 0.5, "of": <spec>}
//                {"op": "convolve", "of": [<spec>, <spec>]}
//
// Parsing is strict: unknown keys, unknown families or ops, missing fields,
// and type mismatches all raise ParseError. Parameter-range violations
// (e.g. a Pareto shape <= 1) surface as InvalidParameter from build().
class DistSpec {
 public:
  // Parses JSON text. Throws ParseError on malformed input.
  static DistSpec parse(const std::string& json_text);

  // Canonical serialization (keys in grammar order, parameters in registry
  // order). indent < 0 yields a compact single line.
  std::string to_json(int indent = 2) const;

  // Instantiates the described distribution. `cfg` configures quadrature
  // captured inside numeric combinators (convolve).
  DemandDistribution build(const NumericConfig& cfg = {}) const;

 private:
  explicit DistSpec(std::shared_ptr<const detail::SpecNode> root);
  std::shared_ptr<const detail::SpecNode> root_;
};

}  // namespace demand
