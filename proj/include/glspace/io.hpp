#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "glspace/exponent_grid.hpp"
#include "glspace/extremal.hpp"
#include "glspace/grid_function.hpp"
#include "glspace/operators.hpp"
#include "glspace/psi.hpp"

namespace glspace {

using Json = nlohmann::ordered_json;

// Numbers go out as shortest round-trip decimals; infinities as the strings "inf" and "-inf".
Json number_to_json(double x);
double number_from_json(const Json& j);
std::string format_number(double x);

Json to_json(const PsiFunction& psi);
PsiFunction psi_from_json(const Json& j);

Json to_json(const ExponentGrid& g);
// Accepts an object or a "start:stop:count[:spacing]" string.
ExponentGrid exponent_grid_from_json(const Json& j);

Json to_json(const WeightSpec& w);
WeightSpec weight_from_json(const Json& j);

// {"n", "half_width", "count", "blocks"}.
Json to_json(const GridShape& s);
GridShape grid_shape_from_json(const Json& j);

// {"kind": ..., "params": {...}}. Table and convolution kernels are referenced by a binary path.
Json to_json(const OperatorSpec& op);
OperatorSpec operator_from_json(const Json& j);

Json read_json_file(const std::string& path);

// Binary grid container: "GLSG", u32 version, u32 n, u32 l, u32 m[l], f64 R[n], u32 N[n],
// u8 scalar kind (0 real, 1 complex), then little-endian f64 samples (re, im interleaved).
void write_grid(std::ostream& os, const GridFunction& f);
GridFunction read_grid(std::istream& is);
void write_grid_file(const std::string& path, const GridFunction& f);
GridFunction read_grid_file(const std::string& path);

// Rows "x,value" (n = 1) or "x,y,value" (n = 2) on a centered uniform grid, any order.
// A leading non-numeric line is taken as a header.
GridFunction read_grid_csv(std::istream& is);
GridFunction read_grid_csv_file(const std::string& path);
void write_grid_csv(std::ostream& os, const GridFunction& f);

// Columns member,p,q,lhs,rhs,ratio,constant,verdict.
std::string report_csv(const VerificationReport& r);
std::string report_json(const VerificationReport& r);
VerificationReport report_from_json(const Json& j);

// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace glspace
