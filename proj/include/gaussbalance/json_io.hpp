#pragma once

// JSON documents for regions, bodies, tuples, lattice bases and
// counterexample instances. Parse errors throw std::invalid_argument naming
// the offending field.

#include "json.hpp"

#include "gaussbalance/balancing.hpp"
#include "gaussbalance/bodies.hpp"
#include "gaussbalance/counterexample.hpp"
#include "gaussbalance/lattice.hpp"
#include "gaussbalance/regions.hpp"

namespace gaussbalance {

using Json = nlohmann::ordered_json;

/// {"knots": [[y, t], ...], "left_slope": number|null, "right_slope": number|null, "clip": number}
Json region_to_json(const HypographRegion& region);
HypographRegion region_from_json(const Json& doc);

/// {"kind": "lp_ball", "p": number|"inf", "n", "radius"}
/// {"kind": "slab", "normal": [...], "half_width"}
/// {"kind": "polytope", "A": [[...], ...], "b": [...]}
/// {"kind": "shifted_cone", "n", "d", "t", "s"}
/// {"kind": "scaled", "base": body, "factor"}
/// {"kind": "translated", "base": body, "shift": [...]}
/// {"kind": "extended", "base": body}
Json body_to_json(const ConvexBody& body);
BodyPtr body_from_json(const Json& doc);

/// {"vectors": [[...], ...]}
Json tuple_to_json(const VectorTuple& tuple);
VectorTuple tuple_from_json(const Json& doc);

/// Row-major n x n array; the columns are the generators.
Json basis_to_json(const LatticeBasis& basis);
LatticeBasis basis_from_json(const Json& doc);

/// {"p", "t", "d", "s", "gamma", "delta", "beta_lb", "gamma_shifted", "min_balance", "tuple"}
Json instance_to_json(const CounterexampleInstance& instance);

}  // namespace gaussbalance
