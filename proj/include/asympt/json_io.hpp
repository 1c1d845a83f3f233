#pragma once

#include <json.hpp>

#include "asympt/exactmath.hpp"
#include "asympt/families.hpp"
#include "asympt/phicat.hpp"

namespace asympt::json_io {

using json = nlohmann::ordered_json;

/// Exact scalars are written as decimal strings ("-1/2"); real ones as JSON numbers.
json to_json(const Scalar& s);
Scalar scalar_from_json(const json& j);

json to_json(const RatPoly& p); // [["num","den"], ...], index = power
RatPoly poly_from_json(const json& j);

json to_json(const FamilySpec& family);
FamilySpec family_from_json(const json& j);

json to_json(const PhiSpec& phi);
PhiSpec phi_from_json(const json& j);

json to_json(const DerivTerm& d);
DerivTerm deriv_from_json(const json& j);

} // namespace asympt::json_io
