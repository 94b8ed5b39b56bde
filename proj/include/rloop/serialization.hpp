#pragma once

#include <json.hpp>

#include "rloop/factorizer.hpp"

namespace rloop {

using Json = nlohmann::ordered_json;

/// Canonical encodings: rationals as "p/q" strings (plain "p" for integers),
/// Gaussian rationals as [re, im], tower elements as
/// {"radicands": [...], "coords": [[re, im], ...]} with the minimal tower.
Json scalar_to_json(const TowerScalar& x);
TowerScalar scalar_from_json(const Json& j);

Json poly_to_json(const Poly& p);
Poly poly_from_json(const Json& j);

Json ratfunc_to_json(const RatFunc& f);
RatFunc ratfunc_from_json(const Json& j);

Json matrix_to_json(const Mat& m);
Mat matrix_from_json(const Json& j);

Json subspace_to_json(const Subspace& s);
Subspace subspace_from_json(const Json& j, std::size_t ambient);

Json loop_to_json(const RationalLoop& g);
RationalLoop loop_from_json(const Json& j);

Json element_to_json(const SimpleElement& e);
SimpleElement element_from_json(const Json& j);

Json factors_to_json(const std::vector<SimpleElement>& factors);
std::vector<SimpleElement> factors_from_json(const Json& j);

/// Canonical bytes (two-space indentation, trailing newline).
std::string dump_canonical(const Json& j);

}  // namespace rloop
