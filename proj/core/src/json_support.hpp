// SPDX-License-Identifier: Apache-2.0
//
// Internal JSON helpers. nlohmann::json is used for building and parsing
// documents; output goes through dump() so that floating-point numbers are
// always written in positional decimal form, never with an exponent.

#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"

namespace baire::detail {

using Json = nlohmann::ordered_json;

/// Pretty-printed with two-space indent and a trailing newline.
std::string dump(const Json& doc);
void dump(std::ostream& out, const Json& doc);

/// Parses text; throws DataError with `what` in the message on syntax errors.
Json parse(std::string_view text, const std::string& what);

}  // namespace baire::detail
