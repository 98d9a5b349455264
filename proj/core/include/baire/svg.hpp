// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string>

namespace baire {

/// Minimal static bar chart; labels and values must have equal length.
std::string bar_chart_svg(const std::string& title, std::span<const std::string> labels,
                          std::span<const double> values);

}  // namespace baire
