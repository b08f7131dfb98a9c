#pragma once

// JSON views of the library's values and reports. Rationals are written as
// {"num": "...", "den": "..."} with decimal strings so nothing is rounded.

#include <nlohmann/json.hpp>

#include "bridgelab/classes.hpp"
#include "bridgelab/optimizer.hpp"

namespace bridgelab {

using Json = nlohmann::ordered_json;

Json to_json(const Rational& q);
Json to_json(const BigInt& z);
Json to_json(const RootedTreeCode& t);
Json to_json(const UnrootedTreeCode& u);
Json to_json(const LabeledForest& g);
Json to_json(const EdgeSplit& s);
Json to_json(const DecompositionTrace& t, const Catalog& catalog);
// Map from u0 code to exact weight.
Json weights_json(const WeightVector& z, const Catalog& catalog);
Json weights_json(const std::vector<double>& z, const Catalog& catalog);
Json catalog_json(const Catalog& catalog);

Json to_json(const SimpleCountingReport& r);
Json to_json(const LocalSweepReport& r);
Json to_json(const SumBoundSweepReport& r);
Json to_json(const BoxingReport& r);
Json to_json(const DissymmetryReport& r);
Json to_json(const OptimizerReport& r, const Catalog& catalog);

Rational rational_from_json(const Json& j);

}  // namespace bridgelab
