// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "baire/digit_codec.hpp"
#include "baire/error.hpp"
#include "json_support.hpp"

namespace baire::detail {
namespace {

void write_value(std::ostream& out, const Json& value, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (value.type()) {
    case Json::value_t::object: {
      if (value.empty()) {
        out << "{}";
        return;
      }
      out << "{\n";
      bool first = true;
      for (const auto& [key, item] : value.items()) {
        if (!first) {
          out << ",\n";
        }
        first = false;
        out << inner << Json(key).dump() << ": ";
        write_value(out, item, indent + 1);
      }
      out << "\n" << pad << "}";
      return;
    }
    case Json::value_t::array: {
      if (value.empty()) {
        out << "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      const bool flat = std::all_of(value.begin(), value.end(),
                                    [](const Json& v) { return v.is_primitive(); });
      if (flat) {
        out << "[";
        for (std::size_t i = 0; i < value.size(); ++i) {
          if (i > 0) {
            out << ", ";
          }
          write_value(out, value[i], indent + 1);
        }
        out << "]";
        return;
      }
      out << "[\n";
      for (std::size_t i = 0; i < value.size(); ++i) {
        if (i > 0) {
          out << ",\n";
        }
        out << inner;
        write_value(out, value[i], indent + 1);
      }
      out << "\n" << pad << "]";
      return;
    }
    case Json::value_t::number_float: {
      const double v = value.get<double>();
      if (!std::isfinite(v)) {
        out << "null";
        return;
      }
      std::string text = format_decimal(v);
      if (text.find('.') == std::string::npos) {
        text += ".0";
      }
      out << text;
      return;
    }
    default:
      out << value.dump();
      return;
  }
}

}  // namespace

void dump(std::ostream& out, const Json& doc) {
  write_value(out, doc, 0);
  out << "\n";
}

std::string dump(const Json& doc) {
  std::ostringstream out;
  dump(out, doc);
  return out.str();
}

Json parse(std::string_view text, const std::string& what) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::exception& e) {
    throw DataError("malformed " + what + " JSON: " + e.what());
  }
}

}  // namespace baire::detail
