// SPDX-License-Identifier: Apache-2.0

#include "baire/svg.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <sstream>

#include "baire/error.hpp"

namespace baire {
namespace {

std::string num(double v) {
  std::array<char, 32> buf{};
  const auto r =
      std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed, 2);
  return {buf.data(), r.ptr};
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string bar_chart_svg(const std::string& title, std::span<const std::string> labels,
                          std::span<const double> values) {
  if (labels.size() != values.size()) {
    throw ValidationError("bar chart needs one label per value");
  }
  constexpr double kWidth = 640;
  constexpr double kHeight = 360;
  constexpr double kMargin = 40;
  const double peak = values.empty() ? 1.0 : std::max(1e-12, *std::max_element(values.begin(), values.end()));
  const double slot = values.empty() ? 0.0 : (kWidth - 2 * kMargin) / static_cast<double>(values.size());

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kWidth) << "\" height=\""
      << num(kHeight) << "\" viewBox=\"0 0 " << num(kWidth) << ' ' << num(kHeight) << "\">\n";
  out << "<text x=\"" << num(kWidth / 2) << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
      << escape(title) << "</text>\n";
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double h = (kHeight - 2 * kMargin) * values[i] / peak;
    const double x = kMargin + slot * static_cast<double>(i);
    out << "<rect x=\"" << num(x + slot * 0.1) << "\" y=\"" << num(kHeight - kMargin - h)
        << "\" width=\"" << num(slot * 0.8) << "\" height=\"" << num(h)
        << "\" fill=\"#4c72b0\"/>\n";
    out << "<text x=\"" << num(x + slot / 2) << "\" y=\"" << num(kHeight - kMargin + 14)
        << "\" text-anchor=\"middle\" font-size=\"10\">" << escape(labels[i]) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace baire
