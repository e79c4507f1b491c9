#pragma once

#include "digitlens/arithmetic.hpp"
#include "digitlens/bounds.hpp"
#include "digitlens/cell_tree.hpp"
#include "digitlens/counting.hpp"
#include "digitlens/digit_system.hpp"
#include "digitlens/manifold.hpp"

#include <json.hpp>

#include <string>
#include <variant>

namespace digitlens {

using json = nlohmann::json;

// Inline JSON text if it starts with '{' or '[', otherwise a file path.
json load_json(const std::string& text_or_path);

// {"p","n","digits","l"}; {"factors":[...]}; {"root","exponent","digit_exponent","n"}.
using AnySystem = std::variant<DigitSystem, ProductSystem, ExponentFormSystem>;

DigitSystem digit_system_from_json(const json& j);
ProductSystem product_system_from_json(const json& j);
ExponentFormSystem exponent_system_from_json(const json& j);
AnySystem system_from_json(const json& j);
CellTree tree_of(const AnySystem& s);  // throws for exponent form
int ambient_dim(const AnySystem& s);

json to_json(const DigitSystem& s);
json to_json(const ProductSystem& s);
json to_json(const ExponentFormSystem& s);

SimilarityTransform transform_from_json(const json& j);
json to_json(const SimilarityTransform& t);
// {"kind", params..., "sigma"?, "dim"?, "transform"?}
ManifoldSpec manifold_from_json(const json& j);
json to_json(const ManifoldSpec& m);

json to_json(const BoundReport& r);
json to_json(const SupEnclosure& e);
json to_json(const CountResult& r);
json to_json(const ScalingFit& f);
json to_json(const ScalingReport& r);
json to_json(const SharpnessResult& r);
json to_json(const LSearchResult& r);
json to_json(const SweepRow& r);
json to_json(const CoverageReport& r);
json to_json(const HitRun& r);

}  // namespace digitlens
