#pragma once

#include <string>

#include "json.hpp"
#include "polytoep/symbol.hpp"

namespace polytoep {

using Json = nlohmann::ordered_json;

/// Symbol document:
///   {"n": 2, "dim_out": 2, "dim_in": 1,
///    "terms": [{"k": [1, 0], "c": [[re, im], [re, im]]}, ...]}
/// "c" lists the coefficient entries row-major.  Doubles are written with
/// shortest round-trip precision, so write -> read is bit-exact.
Json symbol_to_json(const LaurentSymbol& phi);
LaurentSymbol symbol_from_json(const Json& doc, const std::string& source = "<json>");

std::string dump_symbol(const LaurentSymbol& phi);
/// Throws ParseError naming `source`, the line, and the offending field.
LaurentSymbol parse_symbol(const std::string& text, const std::string& source = "<string>");

LaurentSymbol read_symbol(const std::string& path);
void write_symbol(const std::string& path, const LaurentSymbol& phi);

}  // namespace polytoep
