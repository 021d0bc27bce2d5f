// JSON form of phases and matrices.
//
//   {"dimension": 6, "normalization": "inv_sqrt_dim" | "none",
//    "entries": [[entry, ...], ...], "label": "..."}
//
// An entry is {"root": {"num": k, "den": n}}, {"special": "d", "power": p, "root": {...}}
// ("power" defaults to 1), {"float_angle": radians}, or a plain [re, im] pair.
// A file whose entries are all phases loads with an exact grid; a single [re, im]
// entry makes it a float matrix.
#pragma once

#include "hmk/basis.hpp"

#include "json.hpp"

#include <string>

namespace hmk {

nlohmann::json phase_to_json(const PhaseValue& p);
/// `path` prefixes field names in ParseError messages.
PhaseValue phase_from_json(const nlohmann::json& j, const std::string& path = "phase");

/// Exact grid when present, otherwise [re, im] entries with normalization "none".
nlohmann::json matrix_to_json(const BasisMatrix& m);

/// Throws ParseError (with the offending field path) for schema violations and
/// ValidationError when the matrix breaks its invariants: entries of a normalized
/// file must be unimodular, and the columns must be orthonormal to tol.unitarity.
BasisMatrix matrix_from_json(const nlohmann::json& j, const Tolerances& tol = {});

/// File wrappers; JSON syntax errors are reported with line and column.
BasisMatrix read_matrix(const std::string& path, const Tolerances& tol = {});
void write_matrix(const std::string& path, const BasisMatrix& m);

/// Parses text as JSON, raising ParseError with the source name, line and column.
nlohmann::json parse_json_text(const std::string& text, const std::string& source);

}  // namespace hmk
