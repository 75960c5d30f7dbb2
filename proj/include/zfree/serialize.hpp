#pragma once

#include <string>

#include <json.hpp>

#include "zfree/polyfit.hpp"

namespace zfree {

using Json = nlohmann::ordered_json;

/// Complex numbers are [re, im] pairs.
Json to_json(Complex c);
Complex complex_from_json(const Json& j);

/// Tagged trees; from_json(to_json(x)) == x structurally.
Json to_json(const MapExpr& m);
MapExpr map_from_json(const Json& j);
Json to_json(const FuncExpr& f);
FuncExpr func_from_json(const Json& j);

/// Text in the expression language that parses back to an equal tree.
/// Glue nodes have no textual form and raise invalid-argument.
std::string to_source(const MapExpr& m);
std::string to_source(const FuncExpr& f);

Json to_json(const NormEstimate& n);
Json to_json(const ZeroCertificate& c);
Json to_json(const StepRecord& s);
Json to_json(const ApproxReport& r);
Json to_json(const PolyApproximant& p);

/// Report text: two-space indent, trailing newline, shortest round-trip doubles.
std::string dump(const Json& j);

}  // namespace zfree
